#include "ambig/domain.hpp"

#include "ambig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ambig {

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) throw InputError("state space needs at least two states");
    if (labels_.size() > 30) throw CapabilityError("state space limited to 30 states");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw InputError("state labels must be distinct");
}

std::size_t StateSpace::index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw InputError("unknown state '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

bool Range::contains(std::span<const double> v, double tol) const {
    return std::all_of(v.begin(), v.end(), [&](double x) { return contains(x, tol); });
}

Lottery::Lottery(std::map<std::string, double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw InputError("lottery has empty support");
    double sum = 0.0;
    for (const auto& [prize, w] : weights_) {
        if (!(w >= 0.0)) throw InputError("lottery weight for '" + prize + "' is negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > membership_tolerance)
        throw InputError("lottery weights sum to " + std::to_string(sum) + ", expected 1");
}

Lottery Lottery::degenerate(const std::string& prize) { return Lottery({{prize, 1.0}}); }

UtilityIndex::UtilityIndex(std::map<std::string, double> utilities, Unchecked)
    : utilities_(std::move(utilities)) {}

UtilityIndex::UtilityIndex(std::map<std::string, double> utilities) : utilities_(std::move(utilities)) {
    if (utilities_.size() < 2) throw InputError("utility index needs at least two prizes");
    const Range r = range();
    if (!(r.lo < r.hi)) throw InputError("utility index is constant");
    if (!(r.lo < 0.0 && 0.0 < r.hi))
        throw InputError("0 must lie strictly inside the utility range; use normalized() to re-center");
}

UtilityIndex UtilityIndex::normalized(std::map<std::string, double> utilities) {
    UtilityIndex raw(std::move(utilities), Unchecked{});
    if (raw.utilities_.size() < 2) throw InputError("utility index needs at least two prizes");
    const Range r = raw.range();
    if (!(r.lo < r.hi)) throw InputError("utility index is constant");
    if (r.lo < 0.0 && 0.0 < r.hi) return raw;
    return raw.rescaled(1.0, -0.5 * (r.lo + r.hi));
}

double UtilityIndex::of(const std::string& prize) const {
    auto it = utilities_.find(prize);
    if (it == utilities_.end()) throw InputError("unknown prize '" + prize + "'");
    return it->second;
}

double UtilityIndex::of(const Lottery& lottery) const {
    double v = 0.0;
    for (const auto& [prize, w] : lottery.weights()) v += w * of(prize);
    return v;
}

Range UtilityIndex::range() const {
    Range r{utilities_.begin()->second, utilities_.begin()->second};
    for (const auto& [_, v] : utilities_) {
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
    }
    return r;
}

UtilityIndex UtilityIndex::rescaled(double a, double b) const {
    if (!(a > 0.0)) throw InputError("rescaling factor must be positive");
    auto u = utilities_;
    for (auto& [_, v] : u) v = a * v + b;
    return UtilityIndex(std::move(u), Unchecked{});
}

UtilityVector::UtilityVector(Vector values, Range range) : values_(std::move(values)), range_(range) {
    if (!(range_.lo < range_.hi)) throw InputError("utility range must be a nondegenerate interval");
    if (!range_.contains(values_, membership_tolerance))
        throw InputError("utility vector leaves its range");
}

UtilityVector utility_of_act(const Act& act, const UtilityIndex& u) {
    Vector v;
    v.reserve(act.outcomes.size());
    for (const auto& lottery : act.outcomes) v.push_back(u.of(lottery));
    return UtilityVector(std::move(v), u.range());
}

Act mix_acts(const Act& f, const Act& g, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("mixture weight outside [0,1]");
    if (f.outcomes.size() != g.outcomes.size()) throw InputError("acts live on different state spaces");
    if (alpha == 1.0) return f;
    if (alpha == 0.0) return g;
    Act mix;
    for (std::size_t s = 0; s < f.outcomes.size(); ++s) {
        std::map<std::string, double> w;
        for (const auto& [z, p] : f.outcomes[s].weights()) w[z] += alpha * p;
        for (const auto& [z, p] : g.outcomes[s].weights()) w[z] += (1.0 - alpha) * p;
        mix.outcomes.emplace_back(std::move(w));
    }
    return mix;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InputError("dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double min_of(std::span<const double> v) { return *std::min_element(v.begin(), v.end()); }
double max_of(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

Vector shifted(std::span<const double> v, double k) {
    Vector out(v.begin(), v.end());
    for (auto& x : out) x += k;
    return out;
}

Vector scaled(std::span<const double> v, double k) {
    Vector out(v.begin(), v.end());
    for (auto& x : out) x *= k;
    return out;
}

Vector negated(std::span<const double> v) { return scaled(v, -1.0); }

} // namespace ambig
