#pragma once

#include <stdexcept>
#include <string>

namespace ambig {

/// Malformed or inconsistent user input (bad dimensions, invalid weights, unknown names).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The request is well formed but outside what the implementation can decide
/// (state space too large for exhaustive checks, missing niveloid flags, ...).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A credal set or feasibility system turned out to be empty.
class EmptySetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An object violated an invariant it claimed to satisfy.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace ambig
