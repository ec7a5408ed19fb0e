#include "ambig/games.hpp"
#include "ambig/oracle.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace ambig;
using support::pv;

namespace {

Vector random_phi(Rng& rng, std::size_t n) {
    Vector phi(n);
    for (double& v : phi) v = rng.uniform(-1.0, 1.0);
    return phi;
}

const CredalSet left = CredalSet::from_vertices({pv({0.2, 0.8}), pv({0.4, 0.6})});
const CredalSet right = CredalSet::from_vertices({pv({0.6, 0.4}), pv({0.8, 0.2})});

} // namespace

TEST_CASE("a single indicator leader is maxmin") {
    const CredalSet P = support::ellsberg();
    const PenaltyFamily C({PenaltyFunction::indicator(P)});
    for (std::uint64_t i = 0; i < 50; ++i) {
        Rng rng(i);
        const Vector phi = random_phi(rng, 3);
        const LeaderValue v = leader_seeking_value(phi, C);
        CHECK(v.value == doctest::Approx(maxmin_eu(phi, P).value).epsilon(1e-9));
        CHECK(v.leader == 0);
    }
}

TEST_CASE("indicator leaders reproduce the IB game") {
    Rng rng(3);
    const CredalFamily Ps({random_credal_set(rng, 3, 3), random_credal_set(rng, 3, 4)});
    const PenaltyFamily C({PenaltyFunction::indicator(Ps.members[0]), PenaltyFunction::indicator(Ps.members[1])});
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng r = Rng::for_trial(21, i);
        const Vector phi = random_phi(r, 3);
        const LeaderValue a = leader_seeking_value(phi, C);
        const LeaderValue b = ib_seeking_value(phi, Ps);
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
        CHECK(a.leader == b.leader);
    }
}

TEST_CASE("IB values on degenerate families") {
    const Vector phi{0.7, -0.2};
    CHECK(ib_seeking_value(phi, CredalFamily({left})).value == doctest::Approx(maxmin_eu(phi, left).value));
    const auto p1 = pv({0.3, 0.7});
    const auto p2 = pv({0.9, 0.1});
    const CredalFamily singles({CredalSet::singleton(p1), CredalSet::singleton(p2)});
    const LeaderValue s = ib_seeking_value(phi, singles);
    CHECK(s.value == doctest::Approx(std::max(seu_value(phi, p1), seu_value(phi, p2))));
    CHECK(s.leader == 1);
    CHECK(ib_averse_value(phi, singles).value == doctest::Approx(std::min(seu_value(phi, p1), seu_value(phi, p2))));
}

TEST_CASE("leader averse value mirrors the seeking one") {
    const auto kl = PenaltyFunction::entropic(pv({0.3, 0.3, 0.4}), 0.5);
    const auto ind = PenaltyFunction::indicator(support::ellsberg());
    const PenaltyFamily B({kl, ind});
    for (std::uint64_t i = 0; i < 50; ++i) {
        Rng rng(i);
        const Vector phi = random_phi(rng, 3);
        CHECK(leader_averse_value(phi, B).value ==
              doctest::Approx(-leader_seeking_value(negated(phi), B).value).epsilon(1e-12));
    }
}

TEST_CASE("saddle check: a single member has a value") {
    const PenaltyFamily C({PenaltyFunction::indicator(support::ellsberg())});
    const SaddleReport r = saddle_check_penalties(Vector{0.3, -0.5, 0.9}, C);
    CHECK(r.has_value);
    CHECK(r.minmax.value() == doctest::Approx(r.maxmin).epsilon(1e-9));
}

TEST_CASE("saddle check: disjoint indicators have an infinite envelope") {
    const PenaltyFamily C({PenaltyFunction::indicator(left), PenaltyFunction::indicator(right)});
    const SaddleReport r = saddle_check_penalties(Vector{0.3, -0.5}, C);
    CHECK_FALSE(r.has_value);
    CHECK_FALSE(r.minmax.is_finite());
}

TEST_CASE("saddle check: nested sets agree with the LP over the intersection and the grid") {
    for (std::uint64_t i = 0; i < 30; ++i) {
        Rng rng = Rng::for_trial(22, i);
        const CredalSet outer = random_credal_set(rng, 3, 4);
        // Shrink toward the first vertex to get a nested set.
        const auto& vs = outer.vertices();
        std::vector<ProbabilityVector> inner;
        for (const auto& v : vs) {
            Vector m(3);
            for (std::size_t s = 0; s < 3; ++s) m[s] = 0.5 * v[s] + 0.5 * vs[0][s];
            inner.emplace_back(m);
        }
        const CredalSet in = CredalSet::from_vertices(inner);
        const std::vector<PenaltyFunction> members{PenaltyFunction::indicator(outer), PenaltyFunction::indicator(in)};
        const PenaltyFamily C(members);
        const Vector phi = random_phi(rng, 3);
        const SaddleReport r = saddle_check_penalties(phi, C);
        CHECK(r.has_value);
        const std::vector<CredalSet> sets{outer, in};
        const auto lp = optimize_over_intersection(sets, phi, false);
        REQUIRE(lp);
        CHECK(r.minmax.value() == doctest::Approx(lp->value).epsilon(1e-9));
        // The grid can only overestimate a minimum.
        const auto grid = grid_min_envelope(phi, members, 60);
        if (grid.value.is_finite()) CHECK(grid.value.value() >= r.minmax.value() - 1e-9);
    }
}

TEST_CASE("saddle check with polyhedral members against the grid envelope") {
    const auto a = PenaltyFunction::polyhedral({{{2.0, 0.0, 0.0}, -0.4}, {{-2.0, 0.0, 0.0}, 0.4}}, CredalSet::simplex(3));
    const auto b = PenaltyFunction::polyhedral({{{0.0, 1.0, -1.0}, 0.0}}, CredalSet::simplex(3));
    const std::vector<PenaltyFunction> members{a, b};
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng(i);
        const Vector phi = random_phi(rng, 3);
        const SaddleReport r = saddle_check_penalties(phi, PenaltyFamily(members));
        const double grid = grid_min_envelope(phi, members, 200).value.value();
        CHECK(r.minmax.value() <= grid + 1e-12);
        CHECK(grid - r.minmax.value() <= 0.05);
        CHECK(r.maxmin <= r.minmax.value() + 1e-9);
    }
}

TEST_CASE("collapse classification") {
    std::vector<Vector> phis;
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng rng = Rng::for_trial(23, i);
        phis.push_back(random_phi(rng, 2));
    }
    // Nested: the value is maxmin over the smallest member.
    const CredalSet small = CredalSet::from_vertices({pv({0.4, 0.6}), pv({0.5, 0.5})});
    const CredalSet big = CredalSet::from_vertices({pv({0.2, 0.8}), pv({0.7, 0.3})});
    const CollapseReport nested = collapse_detect(CredalFamily({big, small}), phis);
    CHECK(nested.kind == Collapse::maxmin);
    CHECK_FALSE(nested.intersection_empty);

    const CredalSet point = CredalSet::singleton(pv({0.3, 0.7}));
    CHECK(collapse_detect(CredalFamily({point, point}), phis).kind == Collapse::seu);

    // Two segments crossing at (0.4, 0.4, 0.2); neither contains the other.
    std::vector<Vector> phis3;
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng rng = Rng::for_trial(24, i);
        phis3.push_back(random_phi(rng, 3));
    }
    const CredalSet a = CredalSet::from_vertices({pv({0.6, 0.2, 0.2}), pv({0.2, 0.6, 0.2})});
    const CredalSet b = CredalSet::from_vertices({pv({0.4, 0.4, 0.2}), pv({0.2, 0.2, 0.6})});
    const CollapseReport none = collapse_detect(CredalFamily({a, b}), phis3);
    CHECK(none.kind == Collapse::none);
    REQUIRE(none.maxmin_witness);
    const double v = ib_seeking_value(*none.maxmin_witness, CredalFamily({a, b})).value;
    const std::vector<CredalSet> sets{a, b};
    const double m = optimize_over_intersection(sets, *none.maxmin_witness, false)->value;
    CHECK(std::abs(v - m) > 1e-7);
    CHECK(none.maxmax_witness.has_value());
}

TEST_CASE("IB constructors carry homogeneity") {
    const auto f = make_ib_seeking(CredalFamily({left, right}));
    CHECK(f.flags().positively_homogeneous == Flag::asserted);
    CHECK(f.is_normalized_niveloid());
    const auto g = make_ib_averse(CredalFamily({left, right}));
    CHECK(g.is_normalized_niveloid());
}
