#include "ambig/oracle.hpp"

#include "ambig/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace ambig {

std::uint64_t simplex_grid_count(std::size_t n, std::size_t resolution) {
    // C(resolution + n - 1, n - 1) built incrementally; each step stays integral.
    const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t count = 1;
    for (std::size_t k = 1; k < n; ++k) {
        const std::uint64_t num = resolution + k;
        if (count > cap / num) return cap;
        count = count * num / k;
    }
    return count;
}

void for_each_grid_point(std::size_t n, std::size_t resolution,
                         const std::function<void(std::span<const double>)>& visit) {
    if (n < 2 || resolution < 1) throw InputError("grid needs n >= 2 and resolution >= 1");
    if (simplex_grid_count(n, resolution) > grid_budget) throw CapabilityError("simplex grid exceeds point budget");
    std::vector<std::size_t> k(n, 0);
    Vector p(n);
    const double r = static_cast<double>(resolution);
    // k[0..n-2] chosen with k[0] descending; last coordinate takes the rest.
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t s, std::size_t left) {
        if (s == n - 1) {
            k[s] = left;
            for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<double>(k[i]) / r;
            visit(p);
            return;
        }
        for (std::size_t v = left + 1; v-- > 0;) {
            k[s] = v;
            rec(s + 1, left - v);
        }
    };
    rec(0, resolution);
}

std::vector<ProbabilityVector> simplex_grid(std::size_t n, std::size_t resolution) {
    const std::uint64_t count = simplex_grid_count(n, resolution);
    if (count > grid_budget) throw CapabilityError("simplex grid exceeds point budget");
    std::vector<ProbabilityVector> out;
    out.reserve(count);
    for_each_grid_point(n, resolution, [&](std::span<const double> p) { out.emplace_back(Vector(p.begin(), p.end())); });
    return out;
}

namespace {

GridMinimum grid_min(std::size_t n, std::size_t resolution,
                     const std::function<ExtendedReal(std::span<const double>)>& objective) {
    GridMinimum best;
    for_each_grid_point(n, resolution, [&](std::span<const double> p) {
        const ExtendedReal v = objective(p);
        if (v < best.value) {
            best.value = v;
            best.argument = ProbabilityVector(Vector(p.begin(), p.end()));
        }
    });
    return best;
}

} // namespace

GridMinimum grid_min_variational(std::span<const double> phi, const PenaltyFunction& c, std::size_t resolution) {
    return grid_min(phi.size(), resolution,
                    [&](std::span<const double> p) { return evaluate_penalty(c, p) + dot(phi, p); });
}

GridMinimum grid_min_envelope(std::span<const double> phi, std::span<const PenaltyFunction> family,
                              std::size_t resolution) {
    if (family.empty()) throw InputError("empty penalty family");
    return grid_min(phi.size(), resolution, [&](std::span<const double> p) {
        ExtendedReal top = evaluate_penalty(family[0], p);
        for (std::size_t i = 1; i < family.size(); ++i) top = max(top, evaluate_penalty(family[i], p));
        return top + dot(phi, p);
    });
}

GridMinimum grid_min_linear(std::span<const double> phi, const CredalSet& P, std::size_t resolution) {
    return grid_min(phi.size(), resolution, [&](std::span<const double> p) {
        return P.contains(p) ? ExtendedReal(dot(phi, p)) : ExtendedReal::infinity();
    });
}

std::vector<Chain> enumerate_maximal_chains(std::size_t n) {
    if (n < 1 || n > 8) throw CapabilityError("maximal chain enumeration limited to 8 states");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Chain> chains;
    do {
        Chain chain{0};
        for (std::size_t s : perm) chain.push_back(chain.back() | (Event{1} << s));
        chains.push_back(std::move(chain));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return chains;
}

double choquet_by_thresholds(std::span<const double> phi, const Capacity& pi) {
    Vector levels(phi.begin(), phi.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    double value = levels.front();
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        // On (levels[k], levels[k+1]] the upper level set is {phi >= levels[k+1]}.
        Event upper = 0;
        for (std::size_t s = 0; s < phi.size(); ++s)
            if (phi[s] >= levels[k + 1]) upper |= Event{1} << s;
        value += (levels[k + 1] - levels[k]) * pi(upper);
    }
    return value;
}

SaddleValues combined_prior_game(std::span<const double> phi, std::span<const ProbabilityVector> vertices,
                                 double alpha) {
    const std::size_t m = vertices.size();
    std::vector<Vector> payoff(m, Vector(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double v = 0.0;
            for (std::size_t s = 0; s < phi.size(); ++s)
                v += phi[s] * ((1.0 - alpha) * vertices[i][s] + alpha * vertices[j][s]);
            payoff[i][j] = v;
        }
    SaddleValues out{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < m; ++i) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) worst = std::min(worst, payoff[i][j]);
        out.maxmin = std::max(out.maxmin, worst);
    }
    for (std::size_t j = 0; j < m; ++j) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) best = std::max(best, payoff[i][j]);
        out.minmax = std::min(out.minmax, best);
    }
    return out;
}

PhiSampler::PhiSampler(std::size_t n, Range range)
    : n_(n), range_(range), vertex_count_(n <= 12 ? std::uint64_t{1} << n : 0) {
    if (n < 1) throw InputError("sampler needs at least one state");
    if (!(range.lo < range.hi)) throw InputError("empty utility range");
}

Vector PhiSampler::operator()(Rng& rng, std::uint64_t index) const {
    const double lo = range_.lo;
    const double hi = range_.hi;
    Vector phi(n_);
    if (index < vertex_count_) {
        for (std::size_t s = 0; s < n_; ++s) phi[s] = (index >> s) & 1 ? hi : lo;
        return phi;
    }
    switch (rng.below(4)) {
    case 0:
        for (double& v : phi) v = rng.uniform(lo, hi);
        break;
    case 1: {
        // Comonotone ramp: decreasing values along a random state order.
        std::vector<std::size_t> order(n_);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = n_; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        Vector levels(n_);
        for (double& v : levels) v = rng.uniform(lo, hi);
        std::sort(levels.begin(), levels.end(), std::greater<>());
        for (std::size_t i = 0; i < n_; ++i) phi[order[i]] = levels[i];
        break;
    }
    case 2: {
        const double a = rng.uniform(lo, hi);
        const double b = rng.uniform(lo, hi);
        for (double& v : phi) v = rng.coin() ? a : b;
        break;
    }
    default:
        for (double& v : phi) {
            const auto pick = rng.below(3);
            v = pick == 0 ? lo : pick == 1 ? hi : rng.uniform(lo, hi);
        }
        break;
    }
    return phi;
}

ProbabilityVector random_probability(Rng& rng, std::size_t n) {
    Vector p(n);
    for (double& v : p) v = -std::log(1.0 - rng.uniform());
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= sum;
    return ProbabilityVector(std::move(p));
}

CredalSet random_credal_set(Rng& rng, std::size_t n, std::size_t count) {
    std::vector<ProbabilityVector> points;
    for (std::size_t i = 0; i < count; ++i) points.push_back(random_probability(rng, n));
    return CredalSet::from_vertices(std::move(points));
}

Capacity random_capacity(Rng& rng, std::size_t n) {
    const std::size_t count = std::size_t{1} << n;
    std::vector<Event> order(count);
    std::iota(order.begin(), order.end(), Event{0});
    std::stable_sort(order.begin(), order.end(),
                     [](Event a, Event b) { return std::popcount(a) < std::popcount(b); });
    Vector v(count, 0.0);
    for (Event a : order) {
        if (a == 0) continue;
        double base = 0.0;
        for (std::size_t s = 0; s < n; ++s)
            if (a & (Event{1} << s)) base = std::max(base, v[a & ~(Event{1} << s)]);
        v[a] = base + rng.uniform();
    }
    const double top = v[count - 1];
    for (double& x : v) x /= top;
    v[count - 1] = 1.0;
    return Capacity(n, std::move(v));
}

Capacity random_belief_function(Rng& rng, std::size_t n) {
    const std::size_t count = std::size_t{1} << n;
    Vector mass(count, 0.0);
    for (std::size_t a = 1; a < count; ++a) {
        const double u = rng.uniform();
        mass[a] = u * u * u;
    }
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    Vector v(count, 0.0);
    for (std::size_t a = 1; a < count; ++a)
        for (std::size_t b = a;; b = (b - 1) & a) {
            v[a] += mass[b] / total;
            if (b == 0) break;
        }
    v[count - 1] = 1.0;
    return Capacity(n, std::move(v));
}

} // namespace ambig
