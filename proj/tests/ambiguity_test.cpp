#include "ambig/ambiguity.hpp"
#include "ambig/errors.hpp"
#include "ambig/maximal.hpp"
#include "ambig/oracle.hpp"

#include "support.hpp"

#include <algorithm>

#include <doctest.h>

using namespace ambig;
using support::pv;

namespace {

const Range unit{-1.0, 1.0};

PreferenceHandle maxmin_on(const CredalSet& P) { return PreferenceHandle(make_maxmin(P), unit); }

} // namespace

TEST_CASE("a larger prior set is more averse") {
    const CredalSet big = CredalSet::from_vertices({pv({0.6, 0.2, 0.2}), pv({0.2, 0.6, 0.2}), pv({0.2, 0.2, 0.6})});
    const CredalSet small = CredalSet::from_vertices({pv({0.4, 0.3, 0.3}), pv({0.3, 0.4, 0.3})});
    const auto r = more_averse(maxmin_on(big), maxmin_on(small), 10000, 1);
    CHECK(r.holds);
    CHECK(r.trials == 10000);
    CHECK(r.seed == 1);
    const auto reverse = more_averse(maxmin_on(small), maxmin_on(big), 10000, 1);
    CHECK_FALSE(reverse.holds);
    REQUIRE(reverse.witness);
    CHECK(reverse.violation > 0.0);
}

TEST_CASE("more_averse is reflexive") {
    const auto h = maxmin_on(support::ellsberg());
    CHECK(more_averse(h, h, 2000, 3).holds);
}

TEST_CASE("maxmax is not more averse than maxmin") {
    const CredalSet P = support::ellsberg();
    const PreferenceHandle maxmax(make_maxmax(P), unit);
    const auto r = more_averse(maxmax, maxmin_on(P), 1000, 1);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness);
    CHECK(maxmax(*r.witness) > maxmin_on(P)(*r.witness));
}

TEST_CASE("comparisons need a shared range") {
    const PreferenceHandle a(make_maxmin(support::ellsberg()), Range{-1.0, 1.0});
    const PreferenceHandle b(make_maxmin(support::ellsberg()), Range{-2.0, 1.0});
    CHECK_THROWS_AS(more_averse(a, b, 10, 1), InputError);
}

TEST_CASE("property: higher alpha is more averse") {
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng = Rng::for_trial(51, i);
        const CredalSet P = random_credal_set(rng, 3, 3);
        double a1 = rng.uniform(), a2 = rng.uniform();
        if (a1 < a2) std::swap(a1, a2);
        const PreferenceHandle v1(make_alpha_meu(P, P, a1), unit);
        const PreferenceHandle v2(make_alpha_meu(P, P, a2), unit);
        CHECK(more_averse(v1, v2, 2000, i).holds);
    }
}

TEST_CASE("family inclusions follow the comparison") {
    for (std::uint64_t i = 0; i < 10; ++i) {
        Rng rng = Rng::for_trial(52, i);
        const CredalSet P = random_credal_set(rng, 3, 3);
        double a1 = rng.uniform(), a2 = rng.uniform();
        if (a1 < a2) std::swap(a1, a2);
        const PreferenceHandle v1(make_alpha_meu(P, P, a1), unit);
        const PreferenceHandle v2(make_alpha_meu(P, P, a2), unit);
        std::vector<Probe> probes;
        for (int k = 0; k < 6; ++k) {
            probes.push_back({ProbeKind::pstar, random_credal_set(rng, 3, 3)});
            probes.push_back({ProbeKind::qstar, random_credal_set(rng, 3, 3)});
        }
        // Members of the first family, so the premises fire.
        for (const auto& m : alpha_meu_seeking_family(P, P, a1).members) probes.push_back({ProbeKind::pstar, m});
        for (const auto& m : alpha_meu_averse_family(P, P, a2).members) probes.push_back({ProbeKind::qstar, m});
        const FamilyReport r = family_comparison(v1, v2, probes, 1000, i);
        CHECK(r.premise);
        CHECK(r.consistent);
        for (const auto& o : r.outcomes) CHECK(o.exact);
    }
}

TEST_CASE("penalty probes") {
    const auto c0 = PenaltyFunction::entropic(pv({0.2, 0.3, 0.5}), 0.5);
    const PreferenceHandle v1(make_variational(c0), unit);
    const PreferenceHandle v2(make_variational(PenaltyFunction::entropic(pv({0.2, 0.3, 0.5}), 1.0)), unit);
    // A smaller theta stays further from expected utility under q.
    REQUIRE(more_averse(v1, v2, 2000, 1).holds);
    REQUIRE_FALSE(more_averse(v2, v1, 2000, 1).holds);
    const std::vector<Probe> probes{{ProbeKind::cstar, PenaltyFunction::entropic(pv({0.2, 0.3, 0.5}), 0.2)},
                                    {ProbeKind::cstar, PenaltyFunction::indicator(CredalSet::simplex(3))},
                                    {ProbeKind::cstar, PenaltyFunction::entropic(pv({0.2, 0.3, 0.5}), 0.8)}};
    const FamilyReport r = family_comparison(v1, v2, probes, 1000, 1);
    CHECK(r.premise);
    CHECK(r.consistent);
}

TEST_CASE("absolute aversion") {
    const CredalSet P = support::ellsberg();
    const AversionResult maxmin = is_ambiguity_averse(maxmin_on(P), 2000, 1);
    CHECK(maxmin.averse);
    REQUIRE(maxmin.benchmark);
    CHECK(P.contains(maxmin.benchmark->values(), 1e-7));

    const PreferenceHandle maxmax(make_maxmax(P), unit);
    const AversionResult seeking = is_ambiguity_averse(maxmax, 2000, 1);
    CHECK_FALSE(seeking.averse);
    REQUIRE(seeking.certificate);
    CHECK(seeking.certificate->margin > 0.0);
    CHECK(verify_certificate(*seeking.certificate, maxmax));

    Rng rng(7);
    const Capacity pi = random_belief_function(rng, 3);
    const AversionResult choquet = is_ambiguity_averse(PreferenceHandle(make_choquet(pi), unit), 2000, 1);
    CHECK(choquet.averse);
    REQUIRE(choquet.benchmark);
    const auto core = capacity_core(pi);
    REQUIRE(core);
    CHECK(core->contains(choquet.benchmark->values(), 1e-7));
}

TEST_CASE("a tampered certificate does not verify") {
    const CredalSet P = support::ellsberg();
    const PreferenceHandle maxmax(make_maxmax(P), unit);
    AversionResult r = is_ambiguity_averse(maxmax, 2000, 1);
    REQUIRE(r.certificate);
    auto cert = *r.certificate;
    // One profile alone never certifies anything: V(phi) <= max phi.
    std::fill(cert.weights.begin(), cert.weights.end(), 0.0);
    cert.weights[0] = 1.0;
    CHECK_FALSE(verify_certificate(cert, maxmax));
    auto bad = *r.certificate;
    bad.weights[0] = -bad.weights[0];
    CHECK_FALSE(verify_certificate(bad, maxmax));
}
