#include "ambig/crosscheck.hpp"
#include "ambig/errors.hpp"
#include "ambig/functionals.hpp"
#include "ambig/oracle.hpp"

#include "support.hpp"

#include <algorithm>
#include <numeric>

#include <doctest.h>

using namespace ambig;
using support::pv;

namespace {

Vector random_phi(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    Vector phi(n);
    for (double& v : phi) v = rng.uniform(lo, hi);
    return phi;
}

} // namespace

TEST_CASE("subjective expected utility") {
    const auto p = pv({0.1, 0.6, 0.3});
    CHECK(seu_value(Vector{0.4, 0.4, 0.4}, p) == doctest::Approx(0.4));
    CHECK(seu_value(Vector{1.0, 0.0, 0.0}, ProbabilityVector::uniform(3)) == doctest::Approx(1.0 / 3));
}

TEST_CASE("maxmin and maxmax on the three-colour set") {
    const CredalSet P = support::ellsberg();
    const auto red = maxmin_eu(Vector{1.0, 0.0, 0.0}, P);
    CHECK(red.value == doctest::Approx(1.0 / 3));
    const auto black = maxmin_eu(Vector{0.0, 1.0, 0.0}, P);
    CHECK(black.value == doctest::Approx(0.0));
    CHECK(black.argument[1] == doctest::Approx(0.0));
    CHECK(maxmax_eu(Vector{0.0, 1.0, 0.0}, P).value == doctest::Approx(2.0 / 3));
    // Same answers from the halfspace form.
    CHECK(maxmin_eu(Vector{0.0, 1.0, 0.0}, support::ellsberg_h()).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("singleton sets reduce to expected utility") {
    const auto p = pv({0.25, 0.25, 0.5});
    const CredalSet P = CredalSet::singleton(p);
    const Vector phi{0.3, -0.7, 0.1};
    CHECK(maxmin_eu(phi, P).value == doctest::Approx(seu_value(phi, p)));
    CHECK(maxmax_eu(phi, P).value == doctest::Approx(seu_value(phi, p)));
}

TEST_CASE("alpha-MEU endpoints are maxmin and maxmax") {
    const CredalSet P1 = support::ellsberg();
    const CredalSet P2 = CredalSet::from_vertices({pv({0.5, 0.5, 0.0}), pv({0.2, 0.2, 0.6})});
    for (std::uint64_t i = 0; i < 50; ++i) {
        Rng rng(i);
        const Vector phi = random_phi(rng, 3);
        CHECK(alpha_meu(phi, P1, P2, 1.0) == doctest::Approx(maxmin_eu(phi, P1).value));
        CHECK(alpha_meu(phi, P1, P2, 0.0) == doctest::Approx(maxmax_eu(phi, P2).value));
    }
}

TEST_CASE("Choquet integral basics") {
    const auto p = pv({0.2, 0.3, 0.5});
    const Capacity additive = Capacity::additive(p);
    const Vector phi{0.9, -0.4, 0.1};
    CHECK(choquet_value(phi, additive) == doctest::Approx(seu_value(phi, p)));
    const Capacity pi = support::capacity_from(3, [](double m) { return m * m; }, p.values());
    for (Event a = 1; a < 8; ++a) {
        Vector indicator(3, 0.0);
        for (std::size_t s = 0; s < 3; ++s)
            if (a & (Event{1} << s)) indicator[s] = 1.0;
        CHECK(choquet_value(indicator, pi) == doctest::Approx(pi(a)));
    }
}

TEST_CASE("property: Choquet with a convex capacity is maxmin over the core") {
    for (std::uint64_t i = 0; i < 40; ++i) {
        Rng rng = Rng::for_trial(11, i);
        const Capacity pi = random_belief_function(rng, 4);
        const auto core = capacity_core(pi);
        REQUIRE(core);
        for (int k = 0; k < 25; ++k) {
            const Vector phi = random_phi(rng, 4);
            CHECK(choquet_value(phi, pi) == doctest::Approx(maxmin_eu(phi, *core).value).epsilon(1e-9));
        }
    }
}

TEST_CASE("Choquet layer formula agrees with threshold integration") {
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng = Rng::for_trial(12, i);
        const Capacity pi = random_capacity(rng, 4);
        Vector phi = random_phi(rng, 4);
        if (i % 3 == 0) phi[2] = phi[0]; // ties
        CHECK(choquet_value(phi, pi) == doctest::Approx(choquet_by_thresholds(phi, pi)).epsilon(1e-12));
    }
}

TEST_CASE("variational values") {
    const Vector phi{0.3, -0.8, 0.5};
    CHECK(variational_value(phi, PenaltyFunction::indicator(CredalSet::simplex(3))).value == doctest::Approx(-0.8));
    const auto q = pv({0.2, 0.3, 0.5});
    const double flat = variational_value(phi, PenaltyFunction::entropic(q, 1e3)).value;
    CHECK(std::abs(flat - seu_value(phi, q)) <= 1e-3);
    // Small theta approaches the worst state.
    const double sharp = variational_value(phi, PenaltyFunction::entropic(q, 1e-3)).value;
    CHECK(std::abs(sharp - (-0.8)) <= 1e-2);
    CHECK(seeking_variational_value(phi, PenaltyFunction::indicator(CredalSet::simplex(3))).value ==
          doctest::Approx(0.5));
}

TEST_CASE("entropic closed form matches the grid oracle") {
    const auto c = PenaltyFunction::entropic(pv({0.2, 0.3, 0.5}), 0.4);
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng(100 + i);
        const Vector phi = random_phi(rng, 3);
        const double closed = variational_value(phi, c).value;
        const double grid = grid_min_variational(phi, c, 300).value.value();
        CHECK(closed <= grid + 1e-12);
        CHECK(grid - closed <= 5e-3);
        CHECK(closed == doctest::Approx(variational_oracle(phi, c)).epsilon(1e-10));
    }
}

TEST_CASE("property: translation invariance of every evaluator") {
    const CredalSet P = support::ellsberg();
    const CredalSet P2 = CredalSet::from_vertices({pv({0.5, 0.5, 0.0}), pv({0.2, 0.2, 0.6})});
    const Capacity pi = support::capacity_from(3, [](double m) { return std::sqrt(m); }, {0.2, 0.3, 0.5});
    const auto poly = PenaltyFunction::polyhedral({{{1.0, -1.0, 0.0}, 0.1}, {{0.0, 0.5, 0.5}, -0.3}},
                                                  CredalSet::simplex(3));
    const auto kl = PenaltyFunction::entropic(pv({0.2, 0.3, 0.5}), 0.4);
    const std::vector<std::function<double(const Vector&)>> fs{
        [&](const Vector& x) { return maxmin_eu(x, P).value; },
        [&](const Vector& x) { return maxmax_eu(x, P).value; },
        [&](const Vector& x) { return alpha_meu(x, P, P2, 0.3); },
        [&](const Vector& x) { return choquet_value(x, pi); },
        [&](const Vector& x) { return variational_value(x, poly).value; },
        [&](const Vector& x) { return variational_value(x, kl).value; },
        [&](const Vector& x) { return seeking_variational_value(x, poly).value; },
        [&](const Vector& x) { return seeking_variational_value(x, kl).value; },
    };
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = Rng::for_trial(13, i);
        const Vector phi = random_phi(rng, 3);
        const double k = rng.uniform(-1.0, 1.0);
        for (const auto& f : fs) CHECK(std::abs(f(shifted(phi, k)) - f(phi) - k) <= 1e-9);
    }
}

TEST_CASE("property: positive homogeneity of the IB evaluators") {
    const CredalSet P = support::ellsberg();
    const Capacity pi = support::capacity_from(3, [](double m) { return m * m * m; }, {0.2, 0.3, 0.5});
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = Rng::for_trial(14, i);
        const Vector phi = random_phi(rng, 3);
        const double lambda = rng.uniform(0.0, 3.0);
        const Vector scaled_phi = scaled(phi, lambda);
        CHECK(maxmin_eu(scaled_phi, P).value == doctest::Approx(lambda * maxmin_eu(phi, P).value).epsilon(1e-12));
        CHECK(maxmax_eu(scaled_phi, P).value == doctest::Approx(lambda * maxmax_eu(phi, P).value).epsilon(1e-12));
        CHECK(alpha_meu(scaled_phi, P, P, 0.6) == doctest::Approx(lambda * alpha_meu(phi, P, P, 0.6)).epsilon(1e-12));
        CHECK(choquet_value(scaled_phi, pi) == doctest::Approx(lambda * choquet_value(phi, pi)).epsilon(1e-12));
    }
}

TEST_CASE("property: a variational value lies below every penalized expectation") {
    const auto poly = PenaltyFunction::polyhedral({{{1.0, -1.0, 0.0}, 0.1}, {{0.0, 0.5, 0.5}, -0.3}},
                                                  CredalSet::simplex(3));
    const auto kl = PenaltyFunction::entropic(pv({0.2, 0.3, 0.5}), 0.4);
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = Rng::for_trial(15, i);
        const Vector phi = random_phi(rng, 3);
        const ProbabilityVector p = random_probability(rng, 3);
        for (const auto& c : {poly, kl}) {
            const ExtendedReal bound = ExtendedReal(seu_value(phi, p)) + evaluate_penalty(c, p.values());
            CHECK(ExtendedReal(variational_value(phi, c).value - 1e-12) <= bound);
        }
    }
}

TEST_CASE("property: alpha-MEU is the value of the combined-prior game") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = Rng::for_trial(16, i);
        const CredalSet P = random_credal_set(rng, 3, 2 + rng.below(4));
        const Vector phi = random_phi(rng, 3);
        const double alpha = rng.uniform();
        const SaddleValues game = combined_prior_game(phi, P.vertices(), alpha);
        const double v = alpha_meu(phi, P, P, alpha);
        CHECK(std::abs(v - game.maxmin) <= 1e-9);
        CHECK(std::abs(v - game.minmax) <= 1e-9);
    }
}

TEST_CASE("property: Choquet is additive on comonotone profiles") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = Rng::for_trial(17, i);
        const Capacity pi = random_capacity(rng, 4);
        std::vector<std::size_t> order(4);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t k = 3; k > 0; --k) std::swap(order[k], order[rng.below(k + 1)]);
        Vector phi(4), psi(4);
        double a = 1.0, b = 1.0;
        for (std::size_t k = 0; k < 4; ++k) {
            a -= rng.uniform(0.0, 0.5);
            b -= rng.uniform(0.0, 0.5);
            phi[order[k]] = a;
            psi[order[k]] = b;
        }
        Vector sum(4);
        for (std::size_t s = 0; s < 4; ++s) sum[s] = phi[s] + psi[s];
        CHECK(choquet_value(sum, pi) == doctest::Approx(choquet_value(phi, pi) + choquet_value(psi, pi)).epsilon(1e-12));
    }
}

TEST_CASE("niveloid checker on known functionals") {
    const Range range{-1.0, 1.0};
    const auto maxmin = check_niveloid(make_maxmin(support::ellsberg()), range, 2000, 5);
    CHECK(maxmin.flags.monotone == Flag::asserted);
    CHECK(maxmin.flags.translation_invariant == Flag::asserted);
    CHECK(maxmin.flags.positively_homogeneous == Flag::asserted);
    CHECK(maxmin.flags.concave == Flag::asserted);
    CHECK(maxmin.flags.convex == Flag::refuted);

    Rng rng(9);
    const auto choquet = check_niveloid(make_choquet(random_capacity(rng, 4)), range, 10000, 6);
    CHECK(choquet.flags.monotone == Flag::asserted);
    CHECK(choquet.flags.translation_invariant == Flag::asserted);
    CHECK(choquet.flags.positively_homogeneous == Flag::asserted);
    CHECK(choquet.trials == 10000);
}

TEST_CASE("sum of squares is caught with a witness") {
    const auto squares = make_custom(
        3,
        [](std::span<const double> phi) {
            double v = 0.0;
            for (double x : phi) v += x * x;
            return v;
        },
        "squares");
    const auto report = check_niveloid(squares, Range{}, 1000, 1);
    CHECK(report.flags.translation_invariant == Flag::refuted);
    const PropertyWitness* w = report.witness(Property::translation_invariant);
    REQUIRE(w);
    CHECK(w->violation > 0.0);
    CHECK(w->first.size() == 3);
}

TEST_CASE("handles require a normalized niveloid and a range around zero") {
    const auto squares = make_custom(2, [](std::span<const double> phi) { return phi[0] * phi[0]; }, "sq");
    CHECK_THROWS_AS(PreferenceHandle(squares, Range{}), CapabilityError);
    CHECK_THROWS_AS(PreferenceHandle(make_maxmin(CredalSet::simplex(2)), Range{0.0, 1.0}), InputError);
    const PreferenceHandle h(make_maxmin(CredalSet::simplex(2)), Range{});
    CHECK(h.is_ib());
}

TEST_CASE("constructor flags reflect the recipe") {
    CHECK(make_alpha_meu(support::ellsberg(), support::ellsberg(), 1.0).flags().concave == Flag::asserted);
    Rng rng(4);
    CHECK(make_choquet(random_belief_function(rng, 3)).flags().concave == Flag::asserted);
    const Capacity sqrt_pi = support::capacity_from(3, [](double m) { return std::sqrt(m); }, {0.2, 0.3, 0.5});
    CHECK(make_choquet(sqrt_pi).flags().concave == Flag::refuted);
    const auto shifted_c = PenaltyFunction::indicator(support::ellsberg()).plus(0.2);
    CHECK(make_variational(shifted_c).flags().normalized == Flag::refuted);
}
