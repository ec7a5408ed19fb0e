// ambig VERB SCENARIO [ARGS...] [flags]

#include "ambig/commands.hpp"
#include "ambig/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Ambiguity-sensitive preference toolkit"};
    std::string verb;
    std::string path;
    ambig::CommandOptions options;
    std::string psi;
    std::string p;
    app.add_option("verb", verb, "eval | game | member | compare | averse | extend | conjugate | check")
        ->required()
        ->check(CLI::IsMember(ambig::command_verbs()));
    app.add_option("scenario", path, "scenario file")->required();
    app.add_option("args", options.args, "verb arguments (functional, set and penalty names)");
    app.add_flag("--csv", options.csv, "CSV instead of an aligned table");
    app.add_flag("--oracle", options.oracle, "add independent oracle columns (eval, game, member, extend)");
    app.add_flag("--exact", options.exact, "closed-form membership test only");
    app.add_flag("--unbounded", options.unbounded, "penalty membership for an unbounded utility range");
    app.add_option("--trials", options.trials, "sampling budget")->capture_default_str();
    app.add_option("--seed", options.seed, "random seed")->capture_default_str();
    app.add_option("--grid", options.grid, "grid resolution")->capture_default_str();
    app.add_option("--psi", psi, "comma-separated profile for extend");
    app.add_option("--p", p, "comma-separated probability vector for conjugate");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ambig::exit_input;
    }
    if (!psi.empty()) options.psi = psi;
    if (!p.empty()) options.p = p;

    ambig::ParseOptions parse;
    if (const char* env = std::getenv("AMBIG_TOLERANCE")) {
        try {
            std::size_t used = 0;
            parse.derived_tolerance = std::stod(env, &used);
            if (used != std::string(env).size() || !(*parse.derived_tolerance >= 0.0)) throw std::invalid_argument(env);
        } catch (const std::exception&) {
            std::cerr << "input error: AMBIG_TOLERANCE is not a nonnegative number\n";
            return ambig::exit_input;
        }
    }

    std::ifstream in(path);
    if (!in) {
        std::cerr << "input error: cannot read " << path << "\n";
        return ambig::exit_input;
    }
    std::stringstream text;
    text << in.rdbuf();
    ambig::Scenario scenario;
    try {
        scenario = ambig::parse_scenario(text.str(), parse);
    } catch (const ambig::ScenarioError& e) {
        for (const auto& err : e.errors())
            std::cerr << path << ':' << err.where.line << ':' << err.where.column << ": " << err.message << "\n";
        return ambig::exit_input;
    }
    const ambig::CommandResult r = ambig::run_command(verb, scenario, options);
    (r.exit_code == ambig::exit_ok || r.exit_code == ambig::exit_refuted || r.exit_code == ambig::exit_discrepancy
         ? std::cout
         : std::cerr)
        << r.text;
    return r.exit_code;
}
