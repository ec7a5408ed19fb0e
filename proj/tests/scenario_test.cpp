#include "ambig/errors.hpp"
#include "ambig/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

using namespace ambig;

namespace {

std::string read(const std::string& name) {
    std::ifstream in(std::string(AMBIG_SOURCE_DIR) + "/scenarios/" + name);
    REQUIRE(in);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<LocatedError> errors_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.errors();
    }
    return {};
}

const char* minimal = R"([states]
names = heads tails

[prizes]
win = 1
lose = -1

[act bet]
heads = win
tails = lose

[credal fair]
vertex = heads:0.5 tails:0.5
)";

} // namespace

TEST_CASE("a minimal scenario parses") {
    const Scenario s = parse_scenario(minimal);
    CHECK(s.states == std::vector<std::string>{"heads", "tails"});
    CHECK(s.acts.size() == 1);
    CHECK(s.credal_set("fair").is_singleton());
    CHECK(s.utility_of("bet").values() == Vector{1.0, -1.0});
    CHECK(s.range() == Range{-1.0, 1.0});
}

TEST_CASE("an unknown prize is a single located error") {
    std::string text = minimal;
    text.replace(text.find("tails = lose"), 12, "tails = draw");
    const auto errors = errors_of(text);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].where.line == 10);
    CHECK(errors[0].where.column == 9);
    CHECK(errors[0].message.find("draw") != std::string::npos);
}

TEST_CASE("every error is reported with its location") {
    const auto errors = errors_of(R"([states]
names = a b
[act x]
a = nothing
[credal c]
vertex = a:0.5 z:0.5
[functional f]
kind = telepathy
[bogus]
)");
    // The act with a bad prize is not also reported as incomplete.
    REQUIRE(errors.size() == 4);
    CHECK(errors[0].where.line == 4);
    CHECK(errors[1].where.line == 6);
    CHECK(errors[1].where.column == 16);
    CHECK(errors[2].where.line == 8);
    CHECK(errors[3].where.line == 9);
}

TEST_CASE("unresolved references are located at their section") {
    const auto errors = errors_of(std::string(minimal) + "\n[functional f]\nkind = maxmin\nset = missing\n");
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].where.line == 15);
    CHECK(errors[0].message.find("missing") != std::string::npos);
}

TEST_CASE("dimension and invariant violations are located") {
    CHECK(errors_of(std::string(minimal) + "[credal bad]\nvertex = heads:0.7 tails:0.7\n").size() == 1);
    CHECK(errors_of(std::string(minimal) + "[capacity partial]\n{heads} = 0.2\n").size() == 1);
    CHECK(errors_of(std::string(minimal) + "[capacity wrong]\n{heads} = 0.8\n{tails} = 0.1\n{heads,tails} = 0.5\n")
              .size() == 1);
    CHECK(errors_of(std::string(minimal) + "[credal fair]\nvertex = heads:1\n").size() == 1);
    CHECK(errors_of("[states]\nnames = only\n").size() == 1);
    CHECK(errors_of(std::string(minimal) + "[settings]\nrange = 0 1\n").size() == 1);
    CHECK(errors_of(std::string(minimal) + "[act x]\nheads = win:0.5 lose:0.4\ntails = win\n").size() == 1);
}

TEST_CASE("numbers are plain decimals") {
    CHECK(errors_of(std::string(minimal) + "[penalty p]\nkind = entropic\nreference = heads:0.5 tails:0.5\ntheta = nan\n")
              .size() == 1);
    CHECK(errors_of(std::string(minimal) + "[penalty p]\nkind = entropic\nreference = heads:0.5 tails:0.5\ntheta = 2e-1\n")
              .empty());
}

TEST_CASE("round trip through the canonical form") {
    for (const auto& entry : std::filesystem::directory_iterator(std::string(AMBIG_SOURCE_DIR) + "/scenarios")) {
        CAPTURE(entry.path().string());
        const Scenario s = parse_scenario(read(entry.path().filename().string()));
        const std::string canonical = serialize_scenario(s);
        const Scenario back = parse_scenario(canonical);
        CHECK(back == s);
        CHECK(serialize_scenario(back) == canonical);
    }
}

TEST_CASE("every functional kind builds") {
    const Scenario s = parse_scenario(read("kinds.scn"));
    for (const auto& f : s.functionals) {
        CAPTURE(f.name);
        CHECK_NOTHROW(s.functional(f.name));
    }
    CHECK(s.functional("triple").flags().monotone == Flag::asserted);
    CHECK(s.functional("squares").flags().monotone == Flag::unknown);
    CHECK(s.credal_set("pinned").authority() == CredalSet::Authority::halfspaces);
    CHECK(s.capacity("flat")(0b011) == doctest::Approx(0.5));
    CHECK(s.settings.oracle_grid == 120);
}

TEST_CASE("declared niveloids carry their claims") {
    const Scenario s = parse_scenario(read("planted.scn"));
    const Flags f = s.claimed_flags("squares");
    CHECK(f.monotone == Flag::asserted);
    CHECK(f.translation_invariant == Flag::asserted);
    CHECK(f.normalized == Flag::asserted);
}

TEST_CASE("the derived tolerance can be overridden at parse time") {
    ParseOptions o;
    o.derived_tolerance = 1e-4;
    CHECK(parse_scenario(minimal, o).settings.derived_tolerance == 1e-4);
    // An explicit setting in the file wins.
    CHECK(parse_scenario(read("discrepancy.scn"), o).settings.derived_tolerance == 1e-30);
}

TEST_CASE("normalized prizes are re-centred") {
    const Scenario s = parse_scenario(read("ellsberg.scn"));
    CHECK(s.range() == Range{-0.5, 0.5});
    CHECK(s.utility_of("bet_red").values() == Vector{0.5, -0.5, -0.5});
}
