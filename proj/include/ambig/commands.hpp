#pragma once

// Verb dispatch for the command-line tool. Each verb reads named objects out
// of a scenario, calls the library and formats the result as a table or CSV.

#include "ambig/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ambig {

/// Exit statuses shared by every verb.
enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_input = 2,
    exit_capability = 3,
    exit_refuted = 4,
    exit_discrepancy = 5,
};

struct CommandOptions {
    /// Positional arguments after the verb and scenario file.
    std::vector<std::string> args;
    bool csv = false;
    bool oracle = false;
    bool exact = false;
    bool unbounded = false;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::size_t grid = 60;
    /// Comma-separated utility profile for `extend`.
    std::optional<std::string> psi;
    /// Comma-separated probability vector for `conjugate`.
    std::optional<std::string> p;
};

struct CommandResult {
    int exit_code = exit_ok;
    std::string text;
};

const std::vector<std::string>& command_verbs();

/// Runs one verb. Library errors become exit codes with a one-line message;
/// nothing escapes except std::bad_alloc.
CommandResult run_command(const std::string& verb, const Scenario& scenario, const CommandOptions& options);

} // namespace ambig
