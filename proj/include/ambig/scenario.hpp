#pragma once

// Text scenario format. Sections are introduced by [kind] or [kind NAME];
// every other nonblank line is `key = value`. `#` starts a comment.
//
//   [states]      names = s1 s2 ...
//   [prizes]      PRIZE = utility ...        normalize = true|false
//   [act NAME]    STATE = PRIZE | STATE = PRIZE:w PRIZE:w ...
//   [credal NAME] vertex = STATE:p ...        (repeatable, missing states are 0)
//                 constraint = STATE:a ... (<=|>=|=) bound   (repeatable)
//                 authority = vertices|halfspaces
//   [capacity NAME] {s1,s2} = value ...       ({} and the full set default to 0 and 1)
//                 additive = STATE:p ...
//   [penalty NAME] kind = indicator|polyhedral|entropic
//                 set = CREDAL                (indicator)
//                 piece = STATE:a ... const:b (polyhedral, repeatable)
//                 domain = CREDAL             (polyhedral, default the simplex)
//                 reference = STATE:q ...     theta = t   (entropic)
//                 offset = k
//   [family NAME] kind = credal|penalty       members = NAME ...
//   [functional NAME] kind = seu|maxmin|maxmax|alpha_meu|choquet|variational|
//                 seeking|ib_seeking|ib_averse|leader_seeking|leader_averse|
//                 sum_of_squares|scaled
//                 prior, set, averse, seeking, alpha, capacity, penalty,
//                 family, of, factor: as the kind requires
//                 declare = niveloid | monotone translation_invariant ...
//   [settings]    tolerance = x   derived_tolerance = x   range = lo hi
//                 oracle_grid = resolution

#include "ambig/credal.hpp"
#include "ambig/domain.hpp"
#include "ambig/functionals.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ambig {

struct Location {
    std::size_t line = 0;
    std::size_t column = 0;
};

struct LocatedError {
    Location where;
    std::string message;
};

/// Every problem found in a scenario, in source order.
class ScenarioError : public std::invalid_argument {
public:
    explicit ScenarioError(std::vector<LocatedError> errors);
    const std::vector<LocatedError>& errors() const { return errors_; }

private:
    std::vector<LocatedError> errors_;
};

struct CredalDecl {
    std::string name;
    std::vector<Vector> vertices;
    std::vector<LinearConstraint> constraints;
    std::optional<CredalSet::Authority> authority;
    bool operator==(const CredalDecl&) const = default;
};

struct CapacityDecl {
    std::string name;
    Vector values;
    bool operator==(const CapacityDecl&) const = default;
};

struct PenaltyDecl {
    std::string name;
    std::string kind;
    std::string set;
    std::vector<AffinePiece> pieces;
    std::string domain;
    Vector reference;
    double theta = 0.0;
    double offset = 0.0;
    bool operator==(const PenaltyDecl&) const = default;
};

struct FamilyDecl {
    std::string name;
    std::string kind;
    std::vector<std::string> members;
    bool operator==(const FamilyDecl&) const = default;
};

struct FunctionalDecl {
    std::string name;
    std::string kind;
    std::map<std::string, std::string> params;
    std::vector<std::string> declared;
    bool operator==(const FunctionalDecl&) const = default;
};

struct ActDecl {
    std::string name;
    Act act;
    bool operator==(const ActDecl&) const = default;
};

struct Settings {
    double tolerance = membership_tolerance;
    double derived_tolerance = ambig::derived_tolerance;
    std::optional<Range> range;
    std::size_t oracle_grid = 200;
    bool operator==(const Settings&) const = default;
};

class Scenario {
public:
    std::vector<std::string> states;
    std::vector<std::pair<std::string, double>> prizes;
    bool normalize = false;
    std::vector<ActDecl> acts;
    std::vector<CredalDecl> credal_sets;
    std::vector<CapacityDecl> capacities;
    std::vector<PenaltyDecl> penalties;
    std::vector<FamilyDecl> families;
    std::vector<FunctionalDecl> functionals;
    Settings settings;

    bool operator==(const Scenario&) const = default;

    StateSpace state_space() const { return StateSpace(states); }
    UtilityIndex utility() const;
    /// Range from [settings] or else the utility range of the prizes.
    Range range() const;

    const ActDecl& act(const std::string& name) const;
    UtilityVector utility_of(const std::string& act_name) const;

    CredalSet credal_set(const std::string& name) const;
    Capacity capacity(const std::string& name) const;
    PenaltyFunction penalty(const std::string& name) const;
    CredalFamily credal_family(const std::string& name) const;
    PenaltyFamily penalty_family(const std::string& name) const;
    const FamilyDecl& family(const std::string& name) const;
    PreferenceFunctional functional(const std::string& name) const;
    /// Flags the scenario claims for a functional: construction guarantees
    /// plus anything listed under `declare`.
    Flags claimed_flags(const std::string& name) const;

    bool has_credal_set(const std::string& name) const;
    bool has_penalty(const std::string& name) const;
};

struct ParseOptions {
    /// Default for derived_tolerance when [settings] does not set it.
    std::optional<double> derived_tolerance;
};

/// Parses and fully validates; throws ScenarioError listing every problem.
Scenario parse_scenario(const std::string& text, const ParseOptions& options = {});

/// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

} // namespace ambig
