#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ambig {

using Vector = std::vector<double>;

/// Bitmask over states; bit s set means state s belongs to the event.
using Event = std::uint32_t;

/// Default tolerance for simplex membership and weight sums.
inline constexpr double membership_tolerance = 1e-9;
/// Default tolerance for quantities derived through optimization.
inline constexpr double derived_tolerance = 1e-7;

/// Finite set of named states; events are all subsets.
class StateSpace {
public:
    explicit StateSpace(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    /// Index of a state label; throws InputError on unknown names.
    std::size_t index_of(const std::string& label) const;

    Event full_event() const { return static_cast<Event>((std::uint64_t{1} << size()) - 1); }
    std::size_t event_count() const { return std::size_t{1} << size(); }

    bool operator==(const StateSpace&) const = default;

private:
    std::vector<std::string> labels_;
};

/// Interval T of admissible utility values, lo < 0 < hi.
struct Range {
    double lo = -1.0;
    double hi = 1.0;

    bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
    bool contains(std::span<const double> v, double tol = 0.0) const;
    double width() const { return hi - lo; }
    bool operator==(const Range&) const = default;
};

/// Finitely supported distribution over named prizes.
class Lottery {
public:
    /// Weights must be nonnegative and sum to one within membership_tolerance.
    explicit Lottery(std::map<std::string, double> weights);
    static Lottery degenerate(const std::string& prize);

    const std::map<std::string, double>& weights() const { return weights_; }
    bool operator==(const Lottery&) const = default;

private:
    std::map<std::string, double> weights_;
};

/// Anscombe-Aumann act: one lottery per state.
struct Act {
    std::vector<Lottery> outcomes;
    bool operator==(const Act&) const = default;
};

/// Affine utility on lotteries, given by its values on prizes.
class UtilityIndex {
public:
    /// Requires a nonconstant index with 0 strictly inside [min, max].
    explicit UtilityIndex(std::map<std::string, double> utilities);

    /// Re-centers an index that violates the interior-zero requirement by
    /// subtracting the midpoint of its range. Opt-in only.
    static UtilityIndex normalized(std::map<std::string, double> utilities);

    const std::map<std::string, double>& utilities() const { return utilities_; }
    double of(const std::string& prize) const;
    double of(const Lottery& lottery) const;
    Range range() const;

    /// Positive affine rescaling a*u + b.
    UtilityIndex rescaled(double a, double b) const;

private:
    struct Unchecked {};
    UtilityIndex(std::map<std::string, double> utilities, Unchecked);
    std::map<std::string, double> utilities_;
};

/// State-indexed utility profile phi = u(f), with the interval T it lives in.
class UtilityVector {
public:
    UtilityVector(Vector values, Range range);

    const Vector& values() const { return values_; }
    const Range& range() const { return range_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t s) const { return values_[s]; }

    operator std::span<const double>() const { return values_; } // NOLINT(implicit)

private:
    Vector values_;
    Range range_;
};

UtilityVector utility_of_act(const Act& act, const UtilityIndex& u);

/// Statewise mixture alpha*f + (1-alpha)*g.
Act mix_acts(const Act& f, const Act& g, double alpha);

// Small vector helpers shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double min_of(std::span<const double> v);
double max_of(std::span<const double> v);
Vector shifted(std::span<const double> v, double k);
Vector scaled(std::span<const double> v, double k);
Vector negated(std::span<const double> v);

} // namespace ambig
