#include "ambig/scenario.hpp"

#include "ambig/errors.hpp"
#include "ambig/games.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

namespace ambig {

namespace {

std::string format_errors(const std::vector<LocatedError>& errors) {
    std::ostringstream os;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (i) os << '\n';
        os << errors[i].where.line << ':' << errors[i].where.column << ": " << errors[i].message;
    }
    return os.str();
}

} // namespace

ScenarioError::ScenarioError(std::vector<LocatedError> errors)
    : std::invalid_argument(format_errors(errors)), errors_(std::move(errors)) {}

// ---------------------------------------------------------------------------
// Lexing

namespace {

struct Token {
    std::string text;
    Location where;
};

struct Entry {
    Token key;
    Token value;
};

struct Section {
    std::string kind;
    std::string name;
    Location where;
    std::vector<Entry> entries;
};

std::vector<Token> split_words(const Token& t) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < t.text.size()) {
        while (i < t.text.size() && std::isspace(static_cast<unsigned char>(t.text[i]))) ++i;
        const std::size_t start = i;
        while (i < t.text.size() && !std::isspace(static_cast<unsigned char>(t.text[i]))) ++i;
        if (i > start) out.push_back({t.text.substr(start, i - start), {t.where.line, t.where.column + start}});
    }
    return out;
}

Token trimmed(const std::string& line, std::size_t begin, std::size_t end, std::size_t line_no) {
    while (begin < end && std::isspace(static_cast<unsigned char>(line[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(line[end - 1]))) --end;
    return {line.substr(begin, end - begin), {line_no, begin + 1}};
}

class Parser {
public:
    explicit Parser(const ParseOptions& options) : options_(options) {}

    Scenario run(const std::string& text);

private:
    void error(Location where, std::string message) { errors_.push_back({where, std::move(message)}); }

    std::vector<Section> lex(const std::string& text);
    std::optional<double> number(const Token& t);
    std::optional<std::size_t> state(const Token& t);
    /// "STATE:x ..." into a state-indexed vector (missing states 0).
    std::optional<Vector> state_vector(const std::vector<Token>& words, bool allow_const, double* constant);
    std::optional<Event> event(const Token& t);

    void read_states(const Section& s);
    void read_prizes(const Section& s);
    void read_act(const Section& s);
    void read_credal(const Section& s);
    void read_capacity(const Section& s);
    void read_penalty(const Section& s);
    void read_family(const Section& s);
    void read_functional(const Section& s);
    void read_settings(const Section& s);

    void validate();
    bool claim_name(const std::string& kind, const Section& s);

    const ParseOptions& options_;
    Scenario sc_;
    std::vector<LocatedError> errors_;
    std::map<std::string, Location> where_;
    bool states_ok_ = false;
};

std::vector<Section> Parser::lex(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t end = line.find('#');
        if (end == std::string::npos) end = line.size();
        const Token whole = trimmed(line, 0, end, line_no);
        if (whole.text.empty()) continue;
        if (whole.text.front() == '[') {
            if (whole.text.back() != ']') {
                error(whole.where, "section header is missing ']'");
                continue;
            }
            const std::size_t open = whole.where.column - 1;
            const Token inner = trimmed(line, open + 1, open + whole.text.size() - 1, line_no);
            const auto words = split_words(inner);
            if (words.empty() || words.size() > 2) {
                error(whole.where, "section header must be [kind] or [kind NAME]");
                continue;
            }
            sections.push_back({words[0].text, words.size() == 2 ? words[1].text : "", whole.where, {}});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || eq >= end) {
            error(whole.where, "expected 'key = value'");
            continue;
        }
        if (sections.empty()) {
            error(whole.where, "entry outside of any section");
            continue;
        }
        Entry e{trimmed(line, 0, eq, line_no), trimmed(line, eq + 1, end, line_no)};
        if (e.key.text.empty()) {
            error(whole.where, "empty key");
            continue;
        }
        if (e.value.text.empty()) e.value.where = {line_no, eq + 2};
        sections.back().entries.push_back(std::move(e));
    }
    return sections;
}

std::optional<double> Parser::number(const Token& t) {
    const std::string& s = t.text;
    double v = 0.0;
    const bool plausible = !s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-' ||
                                          s[0] == '+' || s[0] == '.');
    const char* first = s.data() + (!s.empty() && s[0] == '+' ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (!plausible || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        error(t.where, "expected a decimal number, got '" + s + "'");
        return std::nullopt;
    }
    return v;
}

std::optional<std::size_t> Parser::state(const Token& t) {
    const auto it = std::find(sc_.states.begin(), sc_.states.end(), t.text);
    if (it == sc_.states.end()) {
        error(t.where, "unknown state '" + t.text + "'");
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - sc_.states.begin());
}

std::optional<Vector> Parser::state_vector(const std::vector<Token>& words, bool allow_const, double* constant) {
    Vector v(sc_.states.size(), 0.0);
    std::vector<bool> seen(v.size(), false);
    bool ok = true;
    bool seen_const = false;
    for (const auto& w : words) {
        const std::size_t colon = w.text.find(':');
        if (colon == std::string::npos) {
            error(w.where, "expected NAME:number, got '" + w.text + "'");
            ok = false;
            continue;
        }
        const Token name{w.text.substr(0, colon), w.where};
        const Token num{w.text.substr(colon + 1), {w.where.line, w.where.column + colon + 1}};
        const auto x = number(num);
        if (allow_const && name.text == "const") {
            if (seen_const) {
                error(name.where, "'const' given twice");
                ok = false;
            }
            seen_const = true;
            if (x) *constant = *x;
            ok = ok && x.has_value();
            continue;
        }
        const auto s = state(name);
        if (!s || !x) {
            ok = false;
            continue;
        }
        if (seen[*s]) {
            error(name.where, "state '" + name.text + "' given twice");
            ok = false;
        }
        seen[*s] = true;
        v[*s] = *x;
    }
    if (!ok) return std::nullopt;
    return v;
}

std::optional<Event> Parser::event(const Token& t) {
    const std::string& s = t.text;
    if (s.size() < 2 || s.front() != '{' || s.back() != '}') {
        error(t.where, "expected an event like {s1,s2}");
        return std::nullopt;
    }
    Event e = 0;
    std::size_t i = 1;
    bool ok = true;
    while (i < s.size() - 1) {
        std::size_t j = s.find(',', i);
        if (j == std::string::npos || j > s.size() - 1) j = s.size() - 1;
        const Token name = trimmed(s, i, j, t.where.line);
        const Token located{name.text, {t.where.line, t.where.column + name.where.column - 1}};
        if (!located.text.empty()) {
            if (const auto st = state(located)) e |= Event{1} << *st;
            else ok = false;
        }
        i = j + 1;
    }
    if (!ok) return std::nullopt;
    return e;
}

bool Parser::claim_name(const std::string& kind, const Section& s) {
    if (s.name.empty()) {
        error(s.where, "[" + kind + "] needs a name");
        return false;
    }
    const auto [it, fresh] = where_.emplace(kind + " " + s.name, s.where);
    if (!fresh) {
        error(s.where, kind + " '" + s.name + "' already defined at line " + std::to_string(it->second.line));
        return false;
    }
    return true;
}

void Parser::read_states(const Section& s) {
    for (const auto& e : s.entries) {
        if (e.key.text != "names") {
            error(e.key.where, "unknown key '" + e.key.text + "' in [states]");
            continue;
        }
        for (const auto& w : split_words(e.value)) sc_.states.push_back(w.text);
        try {
            StateSpace check(sc_.states);
            states_ok_ = true;
        } catch (const std::exception& ex) {
            error(e.value.where, ex.what());
        }
    }
}

void Parser::read_prizes(const Section& s) {
    for (const auto& e : s.entries) {
        if (e.key.text == "normalize") {
            if (e.value.text == "true") sc_.normalize = true;
            else if (e.value.text == "false") sc_.normalize = false;
            else error(e.value.where, "normalize must be true or false");
            continue;
        }
        if (std::any_of(sc_.prizes.begin(), sc_.prizes.end(), [&](const auto& p) { return p.first == e.key.text; })) {
            error(e.key.where, "prize '" + e.key.text + "' given twice");
            continue;
        }
        if (const auto v = number(e.value)) sc_.prizes.emplace_back(e.key.text, *v);
    }
}

void Parser::read_act(const Section& s) {
    if (!claim_name("act", s)) return;
    std::vector<std::optional<Lottery>> outcomes(sc_.states.size());
    bool ok = true;
    for (const auto& e : s.entries) {
        const auto st = state(e.key);
        if (!st) {
            ok = false;
            continue;
        }
        if (outcomes[*st]) {
            error(e.key.where, "state '" + e.key.text + "' assigned twice");
            ok = false;
            continue;
        }
        std::map<std::string, double> weights;
        bool word_error = false;
        for (const auto& w : split_words(e.value)) {
            const std::size_t colon = w.text.find(':');
            const std::string prize = w.text.substr(0, colon);
            double weight = 1.0;
            if (colon != std::string::npos) {
                const auto x = number({w.text.substr(colon + 1), {w.where.line, w.where.column + colon + 1}});
                if (!x) {
                    ok = false;
                    word_error = true;
                    continue;
                }
                weight = *x;
            }
            if (std::none_of(sc_.prizes.begin(), sc_.prizes.end(), [&](const auto& p) { return p.first == prize; })) {
                error(w.where, "unknown prize '" + prize + "'");
                ok = false;
                word_error = true;
                continue;
            }
            if (!weights.emplace(prize, weight).second) {
                error(w.where, "prize '" + prize + "' repeated in one lottery");
                ok = false;
            }
        }
        if (weights.empty()) {
            if (!word_error) error(e.value.where, "empty lottery");
            ok = false;
            continue;
        }
        try {
            outcomes[*st] = Lottery(std::move(weights));
        } catch (const std::exception& ex) {
            error(e.value.where, ex.what());
            ok = false;
        }
    }
    for (std::size_t i = 0; ok && i < outcomes.size(); ++i)
        if (!outcomes[i]) {
            error(s.where, "act '" + s.name + "' has no outcome for state '" + sc_.states[i] + "'");
            ok = false;
        }
    if (!ok) return;
    ActDecl decl{s.name, {}};
    for (auto& o : outcomes) decl.act.outcomes.push_back(std::move(*o));
    sc_.acts.push_back(std::move(decl));
}

void Parser::read_credal(const Section& s) {
    if (!claim_name("credal", s)) return;
    CredalDecl decl{s.name, {}, {}, std::nullopt};
    bool ok = true;
    for (const auto& e : s.entries) {
        if (e.key.text == "vertex") {
            const auto v = state_vector(split_words(e.value), false, nullptr);
            if (v) decl.vertices.push_back(*v);
            else ok = false;
        } else if (e.key.text == "constraint") {
            auto words = split_words(e.value);
            const auto op = std::find_if(words.begin(), words.end(),
                                         [](const Token& w) { return w.text == "<=" || w.text == ">=" || w.text == "="; });
            if (op == words.end() || op + 2 != words.end()) {
                error(e.value.where, "constraint must read 'STATE:a ... (<=|>=|=) bound'");
                ok = false;
                continue;
            }
            const auto coef = state_vector({words.begin(), op}, false, nullptr);
            const auto bound = number(*(op + 1));
            if (!coef || !bound) {
                ok = false;
                continue;
            }
            const lp::Sense sense = op->text == "<=" ? lp::Sense::less_equal
                                    : op->text == ">=" ? lp::Sense::greater_equal
                                                        : lp::Sense::equal;
            decl.constraints.push_back({*coef, sense, *bound});
        } else if (e.key.text == "authority") {
            if (e.value.text == "vertices") decl.authority = CredalSet::Authority::vertices;
            else if (e.value.text == "halfspaces") decl.authority = CredalSet::Authority::halfspaces;
            else {
                error(e.value.where, "authority must be 'vertices' or 'halfspaces'");
                ok = false;
            }
        } else {
            error(e.key.where, "unknown key '" + e.key.text + "' in [credal]");
            ok = false;
        }
    }
    if (!ok) return;
    if (!decl.vertices.empty() && !decl.constraints.empty() && !decl.authority) {
        error(s.where, "credal set '" + s.name + "' has both representations; say which is authoritative");
        return;
    }
    sc_.credal_sets.push_back(std::move(decl));
}

void Parser::read_capacity(const Section& s) {
    if (!claim_name("capacity", s)) return;
    const std::size_t n = sc_.states.size();
    if (n > 20) {
        error(s.where, "capacities are limited to 20 states");
        return;
    }
    const std::size_t count = std::size_t{1} << n;
    Vector values(count, 0.0);
    std::vector<bool> seen(count, false);
    bool ok = true;
    for (const auto& e : s.entries) {
        if (e.key.text == "additive") {
            const auto p = state_vector(split_words(e.value), false, nullptr);
            if (!p) {
                ok = false;
                continue;
            }
            try {
                const Capacity c = Capacity::additive(ProbabilityVector(*p));
                values = c.values();
                std::fill(seen.begin(), seen.end(), true);
            } catch (const std::exception& ex) {
                error(e.value.where, ex.what());
                ok = false;
            }
            continue;
        }
        const auto ev = event(e.key);
        const auto v = number(e.value);
        if (!ev || !v) {
            ok = false;
            continue;
        }
        if (seen[*ev] && *ev != 0 && *ev != count - 1) {
            error(e.key.where, "event given twice");
            ok = false;
        }
        seen[*ev] = true;
        values[*ev] = *v;
    }
    if (!seen[count - 1]) values[count - 1] = 1.0;
    seen[0] = seen[count - 1] = true;
    const auto missing = std::count(seen.begin(), seen.end(), false);
    if (ok && missing > 0) {
        error(s.where, "capacity '" + s.name + "' leaves " + std::to_string(missing) + " events unspecified");
        ok = false;
    }
    if (ok) sc_.capacities.push_back({s.name, std::move(values)});
}

void Parser::read_penalty(const Section& s) {
    if (!claim_name("penalty", s)) return;
    PenaltyDecl decl;
    decl.name = s.name;
    bool ok = true;
    for (const auto& e : s.entries) {
        const std::string& k = e.key.text;
        if (k == "kind") {
            decl.kind = e.value.text;
            if (decl.kind != "indicator" && decl.kind != "polyhedral" && decl.kind != "entropic") {
                error(e.value.where, "penalty kind must be indicator, polyhedral or entropic");
                ok = false;
            }
        } else if (k == "set") {
            decl.set = e.value.text;
        } else if (k == "domain") {
            decl.domain = e.value.text;
        } else if (k == "piece") {
            double constant = 0.0;
            const auto slope = state_vector(split_words(e.value), true, &constant);
            if (slope) decl.pieces.push_back({*slope, constant});
            else ok = false;
        } else if (k == "reference") {
            const auto q = state_vector(split_words(e.value), false, nullptr);
            if (q) decl.reference = *q;
            else ok = false;
        } else if (k == "theta" || k == "offset") {
            const auto v = number(e.value);
            if (v) (k == "theta" ? decl.theta : decl.offset) = *v;
            else ok = false;
        } else {
            error(e.key.where, "unknown key '" + k + "' in [penalty]");
            ok = false;
        }
    }
    if (decl.kind.empty()) {
        error(s.where, "penalty '" + s.name + "' needs a kind");
        ok = false;
    }
    if (ok) sc_.penalties.push_back(std::move(decl));
}

void Parser::read_family(const Section& s) {
    if (!claim_name("family", s)) return;
    FamilyDecl decl{s.name, "", {}};
    bool ok = true;
    for (const auto& e : s.entries) {
        if (e.key.text == "kind") {
            decl.kind = e.value.text;
            if (decl.kind != "credal" && decl.kind != "penalty") {
                error(e.value.where, "family kind must be credal or penalty");
                ok = false;
            }
        } else if (e.key.text == "members") {
            for (const auto& w : split_words(e.value)) decl.members.push_back(w.text);
        } else {
            error(e.key.where, "unknown key '" + e.key.text + "' in [family]");
            ok = false;
        }
    }
    if (decl.kind.empty()) {
        error(s.where, "family '" + s.name + "' needs a kind");
        ok = false;
    }
    if (decl.members.empty()) {
        error(s.where, "family '" + s.name + "' has no members");
        ok = false;
    }
    if (ok) sc_.families.push_back(std::move(decl));
}

const std::set<std::string>& functional_kinds() {
    static const std::set<std::string> kinds{"seu",         "maxmin",         "maxmax",        "alpha_meu",
                                             "choquet",     "variational",    "seeking",       "ib_seeking",
                                             "ib_averse",   "leader_seeking", "leader_averse", "sum_of_squares",
                                             "scaled"};
    return kinds;
}

const std::set<std::string>& declarable() {
    static const std::set<std::string> names{"niveloid", "monotone", "translation_invariant", "positively_homogeneous",
                                             "concave",  "convex",   "normalized"};
    return names;
}

void Parser::read_functional(const Section& s) {
    if (!claim_name("functional", s)) return;
    FunctionalDecl decl{s.name, "", {}, {}};
    bool ok = true;
    static const std::set<std::string> keys{"prior",   "set",    "averse", "seeking", "alpha", "capacity",
                                            "penalty", "family", "of",     "factor"};
    for (const auto& e : s.entries) {
        if (e.key.text == "kind") {
            decl.kind = e.value.text;
            if (!functional_kinds().count(decl.kind)) {
                error(e.value.where, "unknown functional kind '" + decl.kind + "'");
                ok = false;
            }
        } else if (e.key.text == "declare") {
            for (const auto& w : split_words(e.value)) {
                if (!declarable().count(w.text)) {
                    error(w.where, "cannot declare '" + w.text + "'");
                    ok = false;
                }
                decl.declared.push_back(w.text);
            }
        } else if (keys.count(e.key.text)) {
            if (!decl.params.emplace(e.key.text, e.value.text).second) {
                error(e.key.where, "'" + e.key.text + "' given twice");
                ok = false;
            }
            where_["param " + s.name + " " + e.key.text] = e.value.where;
        } else {
            error(e.key.where, "unknown key '" + e.key.text + "' in [functional]");
            ok = false;
        }
    }
    if (decl.kind.empty()) {
        error(s.where, "functional '" + s.name + "' needs a kind");
        ok = false;
    }
    if (ok) sc_.functionals.push_back(std::move(decl));
}

void Parser::read_settings(const Section& s) {
    for (const auto& e : s.entries) {
        const std::string& k = e.key.text;
        if (k == "tolerance" || k == "derived_tolerance") {
            const auto v = number(e.value);
            if (!v) continue;
            if (!(*v >= 0.0)) {
                error(e.value.where, "tolerance must be nonnegative");
                continue;
            }
            (k == "tolerance" ? sc_.settings.tolerance : sc_.settings.derived_tolerance) = *v;
        } else if (k == "range") {
            const auto words = split_words(e.value);
            if (words.size() != 2) {
                error(e.value.where, "range needs 'lo hi'");
                continue;
            }
            const auto lo = number(words[0]);
            const auto hi = number(words[1]);
            if (!lo || !hi) continue;
            if (!(*lo < 0.0 && 0.0 < *hi)) {
                error(e.value.where, "range must satisfy lo < 0 < hi");
                continue;
            }
            sc_.settings.range = Range{*lo, *hi};
        } else if (k == "oracle_grid") {
            const auto v = number(e.value);
            if (!v) continue;
            if (!(*v >= 1.0 && *v == std::floor(*v))) {
                error(e.value.where, "oracle_grid must be a positive integer");
                continue;
            }
            sc_.settings.oracle_grid = static_cast<std::size_t>(*v);
        } else {
            error(e.key.where, "unknown key '" + k + "' in [settings]");
        }
    }
}

void Parser::validate() {
    auto at = [&](const std::string& key) {
        const auto it = where_.find(key);
        return it == where_.end() ? Location{} : it->second;
    };
    auto guarded = [&](Location where, const std::function<void()>& build) {
        try {
            build();
        } catch (const std::exception& ex) {
            error(where, ex.what());
        }
    };
    if (!sc_.prizes.empty() || !sc_.acts.empty())
        guarded(at("prizes"), [&] { (void)sc_.utility(); });
    for (const auto& d : sc_.credal_sets) guarded(at("credal " + d.name), [&] { (void)sc_.credal_set(d.name); });
    for (const auto& d : sc_.capacities) guarded(at("capacity " + d.name), [&] { (void)sc_.capacity(d.name); });
    for (const auto& d : sc_.penalties) guarded(at("penalty " + d.name), [&] { (void)sc_.penalty(d.name); });
    for (const auto& d : sc_.families)
        guarded(at("family " + d.name), [&] {
            if (d.kind == "credal") (void)sc_.credal_family(d.name);
            else (void)sc_.penalty_family(d.name);
        });
    for (const auto& d : sc_.functionals) guarded(at("functional " + d.name), [&] { (void)sc_.functional(d.name); });
    for (const auto& d : sc_.acts) guarded(at("act " + d.name), [&] { (void)sc_.utility_of(d.name); });
}

Scenario Parser::run(const std::string& text) {
    if (options_.derived_tolerance) sc_.settings.derived_tolerance = *options_.derived_tolerance;
    const auto sections = lex(text);
    // States first: every other section refers to them.
    for (const auto& s : sections)
        if (s.kind == "states") {
            if (!sc_.states.empty()) error(s.where, "[states] given twice");
            else read_states(s);
        }
    if (!states_ok_) {
        if (sc_.states.empty()) error({1, 1}, "scenario needs a [states] section with at least two names");
        std::stable_sort(errors_.begin(), errors_.end(), [](const LocatedError& a, const LocatedError& b) {
            return std::tie(a.where.line, a.where.column) < std::tie(b.where.line, b.where.column);
        });
        throw ScenarioError(errors_);
    }
    for (const auto& s : sections)
        if (s.kind == "prizes") {
            where_.emplace("prizes", s.where);
            read_prizes(s);
        }
    for (const auto& s : sections) {
        if (s.kind == "states" || s.kind == "prizes") continue;
        if (s.kind == "act") read_act(s);
        else if (s.kind == "credal") read_credal(s);
        else if (s.kind == "capacity") read_capacity(s);
        else if (s.kind == "penalty") read_penalty(s);
        else if (s.kind == "family") read_family(s);
        else if (s.kind == "functional") read_functional(s);
        else if (s.kind == "settings") read_settings(s);
        else error(s.where, "unknown section kind '" + s.kind + "'");
    }
    if (errors_.empty()) validate();
    if (!errors_.empty()) {
        std::stable_sort(errors_.begin(), errors_.end(), [](const LocatedError& a, const LocatedError& b) {
            return std::tie(a.where.line, a.where.column) < std::tie(b.where.line, b.where.column);
        });
        throw ScenarioError(errors_);
    }
    return sc_;
}

template <class T>
const T& find_named(const std::vector<T>& items, const std::string& name, const char* what) {
    for (const auto& item : items)
        if (item.name == name) return item;
    throw InputError(std::string("unknown ") + what + " '" + name + "'");
}

} // namespace

Scenario parse_scenario(const std::string& text, const ParseOptions& options) { return Parser(options).run(text); }

// ---------------------------------------------------------------------------
// Building library objects

UtilityIndex Scenario::utility() const {
    std::map<std::string, double> u(prizes.begin(), prizes.end());
    if (u.empty()) throw InputError("scenario declares no prizes");
    return normalize ? UtilityIndex::normalized(std::move(u)) : UtilityIndex(std::move(u));
}

Range Scenario::range() const {
    if (settings.range) return *settings.range;
    if (!prizes.empty()) return utility().range();
    return Range{};
}

const ActDecl& Scenario::act(const std::string& name) const { return find_named(acts, name, "act"); }

UtilityVector Scenario::utility_of(const std::string& act_name) const {
    const UtilityVector raw = utility_of_act(act(act_name).act, utility());
    return UtilityVector(raw.values(), range());
}

bool Scenario::has_credal_set(const std::string& name) const {
    return std::any_of(credal_sets.begin(), credal_sets.end(), [&](const CredalDecl& d) { return d.name == name; });
}

bool Scenario::has_penalty(const std::string& name) const {
    return std::any_of(penalties.begin(), penalties.end(), [&](const PenaltyDecl& d) { return d.name == name; });
}

CredalSet Scenario::credal_set(const std::string& name) const {
    const CredalDecl& d = find_named(credal_sets, name, "credal set");
    std::vector<ProbabilityVector> vertices;
    for (const auto& v : d.vertices) vertices.emplace_back(v, settings.tolerance);
    if (vertices.empty()) return CredalSet::from_halfspaces(states.size(), d.constraints);
    if (d.constraints.empty()) return CredalSet::from_vertices(std::move(vertices));
    return CredalSet::from_both(std::move(vertices), d.constraints, *d.authority);
}

Capacity Scenario::capacity(const std::string& name) const {
    return Capacity(states.size(), find_named(capacities, name, "capacity").values);
}

PenaltyFunction Scenario::penalty(const std::string& name) const {
    const PenaltyDecl& d = find_named(penalties, name, "penalty");
    PenaltyFunction c = [&] {
        if (d.kind == "indicator") {
            if (d.set.empty()) throw InputError("indicator penalty needs 'set'");
            return PenaltyFunction::indicator(credal_set(d.set));
        }
        if (d.kind == "polyhedral") {
            if (d.pieces.empty()) throw InputError("polyhedral penalty needs at least one 'piece'");
            return PenaltyFunction::polyhedral(d.pieces,
                                               d.domain.empty() ? CredalSet::simplex(states.size()) : credal_set(d.domain));
        }
        if (d.reference.empty()) throw InputError("entropic penalty needs 'reference'");
        return PenaltyFunction::entropic(ProbabilityVector(d.reference, settings.tolerance), d.theta);
    }();
    return d.offset != 0.0 ? c.plus(d.offset) : c;
}

const FamilyDecl& Scenario::family(const std::string& name) const { return find_named(families, name, "family"); }

CredalFamily Scenario::credal_family(const std::string& name) const {
    const FamilyDecl& d = family(name);
    if (d.kind != "credal") throw InputError("family '" + name + "' is not a credal family");
    std::vector<CredalSet> members;
    for (const auto& m : d.members) members.push_back(credal_set(m));
    return CredalFamily(std::move(members));
}

PenaltyFamily Scenario::penalty_family(const std::string& name) const {
    const FamilyDecl& d = family(name);
    if (d.kind != "penalty") throw InputError("family '" + name + "' is not a penalty family");
    std::vector<PenaltyFunction> members;
    for (const auto& m : d.members) members.push_back(penalty(m));
    return PenaltyFamily(std::move(members));
}

namespace {

const std::string& param(const FunctionalDecl& d, const std::string& key) {
    const auto it = d.params.find(key);
    if (it == d.params.end()) throw InputError("functional '" + d.name + "' of kind " + d.kind + " needs '" + key + "'");
    return it->second;
}

double param_number(const FunctionalDecl& d, const std::string& key) {
    const std::string& s = param(d, key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw InputError("'" + key + "' of functional '" + d.name + "' is not a number");
    return v;
}

void apply_declarations(Flags& f, const std::vector<std::string>& declared) {
    for (const auto& name : declared) {
        if (name == "niveloid") {
            f.monotone = f.translation_invariant = f.normalized = Flag::asserted;
        } else if (name == "monotone") f.monotone = Flag::asserted;
        else if (name == "translation_invariant") f.translation_invariant = Flag::asserted;
        else if (name == "positively_homogeneous") f.positively_homogeneous = Flag::asserted;
        else if (name == "concave") f.concave = Flag::asserted;
        else if (name == "convex") f.convex = Flag::asserted;
        else if (name == "normalized") f.normalized = Flag::asserted;
    }
}

std::vector<std::string> words_of(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

} // namespace

PreferenceFunctional Scenario::functional(const std::string& name) const {
    const FunctionalDecl& d = find_named(functionals, name, "functional");
    const std::size_t n = states.size();
    auto build = [&]() -> PreferenceFunctional {
        const std::string& k = d.kind;
        if (k == "seu") {
            Vector p(n, 0.0);
            for (const auto& w : words_of(param(d, "prior"))) {
                const std::size_t colon = w.find(':');
                if (colon == std::string::npos) throw InputError("prior entries must read STATE:p");
                const auto it = std::find(states.begin(), states.end(), w.substr(0, colon));
                if (it == states.end()) throw InputError("unknown state in prior: " + w);
                p[static_cast<std::size_t>(it - states.begin())] = std::stod(w.substr(colon + 1));
            }
            return make_seu(ProbabilityVector(p, settings.tolerance));
        }
        if (k == "maxmin") return make_maxmin(credal_set(param(d, "set")));
        if (k == "maxmax") return make_maxmax(credal_set(param(d, "set")));
        if (k == "alpha_meu") {
            const bool shared = d.params.count("set") > 0;
            const CredalSet averse = credal_set(shared ? param(d, "set") : param(d, "averse"));
            const CredalSet seeking = credal_set(shared ? param(d, "set") : param(d, "seeking"));
            return make_alpha_meu(averse, seeking, param_number(d, "alpha"));
        }
        if (k == "choquet") return make_choquet(capacity(param(d, "capacity")));
        if (k == "variational") return make_variational(penalty(param(d, "penalty")));
        if (k == "seeking") return make_seeking(penalty(param(d, "penalty")));
        if (k == "ib_seeking") return make_ib_seeking(credal_family(param(d, "family")));
        if (k == "ib_averse") return make_ib_averse(credal_family(param(d, "family")));
        if (k == "leader_seeking") return make_leader_seeking(penalty_family(param(d, "family")));
        if (k == "leader_averse") return make_leader_averse(penalty_family(param(d, "family")));
        if (k == "sum_of_squares")
            return make_custom(
                n,
                [](std::span<const double> phi) {
                    double v = 0.0;
                    for (double x : phi) v += x * x;
                    return v;
                },
                "sum_of_squares");
        if (k == "scaled") {
            if (param(d, "of") == d.name) throw InputError("functional '" + d.name + "' refers to itself");
            const PreferenceFunctional inner = functional(param(d, "of"));
            const double factor = param_number(d, "factor");
            return make_custom(
                n, [inner, factor](std::span<const double> phi) { return factor * inner(phi); },
                "scaled(" + param(d, "of") + ")");
        }
        throw InputError("unknown functional kind '" + k + "'");
    };
    PreferenceFunctional f = build();
    Flags flags = f.flags();
    apply_declarations(flags, d.declared);
    return f.with_flags(flags);
}

Flags Scenario::claimed_flags(const std::string& name) const { return functional(name).flags(); }

// ---------------------------------------------------------------------------
// Canonical form

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string state_list(const std::vector<std::string>& states, const Vector& v, bool skip_zero) {
    std::string out;
    for (std::size_t s = 0; s < v.size(); ++s) {
        if (skip_zero && v[s] == 0.0) continue;
        if (!out.empty()) out += ' ';
        out += states[s] + ':' + num(v[s]);
    }
    return out;
}

} // namespace

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream os;
    os << "[settings]\n";
    os << "tolerance = " << num(sc.settings.tolerance) << '\n';
    os << "derived_tolerance = " << num(sc.settings.derived_tolerance) << '\n';
    if (sc.settings.range) os << "range = " << num(sc.settings.range->lo) << ' ' << num(sc.settings.range->hi) << '\n';
    os << "oracle_grid = " << sc.settings.oracle_grid << '\n';

    os << "\n[states]\nnames =";
    for (const auto& s : sc.states) os << ' ' << s;
    os << '\n';

    if (!sc.prizes.empty() || sc.normalize) {
        os << "\n[prizes]\n";
        for (const auto& [name, u] : sc.prizes) os << name << " = " << num(u) << '\n';
        if (sc.normalize) os << "normalize = true\n";
    }
    for (const auto& a : sc.acts) {
        os << "\n[act " << a.name << "]\n";
        for (std::size_t s = 0; s < sc.states.size(); ++s) {
            os << sc.states[s] << " =";
            const auto& w = a.act.outcomes[s].weights();
            if (w.size() == 1 && w.begin()->second == 1.0) os << ' ' << w.begin()->first;
            else
                for (const auto& [prize, weight] : w) os << ' ' << prize << ':' << num(weight);
            os << '\n';
        }
    }
    for (const auto& c : sc.credal_sets) {
        os << "\n[credal " << c.name << "]\n";
        for (const auto& v : c.vertices) os << "vertex = " << state_list(sc.states, v, true) << '\n';
        for (const auto& k : c.constraints) {
            const char* op = k.sense == lp::Sense::less_equal ? "<=" : k.sense == lp::Sense::greater_equal ? ">=" : "=";
            os << "constraint = " << state_list(sc.states, k.coefficients, false) << ' ' << op << ' ' << num(k.bound)
               << '\n';
        }
        if (c.authority)
            os << "authority = " << (*c.authority == CredalSet::Authority::vertices ? "vertices" : "halfspaces") << '\n';
    }
    for (const auto& c : sc.capacities) {
        os << "\n[capacity " << c.name << "]\n";
        for (std::size_t a = 0; a < c.values.size(); ++a) {
            os << '{';
            bool first = true;
            for (std::size_t s = 0; s < sc.states.size(); ++s)
                if (a & (std::size_t{1} << s)) {
                    os << (first ? "" : ",") << sc.states[s];
                    first = false;
                }
            os << "} = " << num(c.values[a]) << '\n';
        }
    }
    for (const auto& p : sc.penalties) {
        os << "\n[penalty " << p.name << "]\nkind = " << p.kind << '\n';
        if (!p.set.empty()) os << "set = " << p.set << '\n';
        for (const auto& piece : p.pieces)
            os << "piece = " << state_list(sc.states, piece.slope, false) << " const:" << num(piece.intercept) << '\n';
        if (!p.domain.empty()) os << "domain = " << p.domain << '\n';
        if (!p.reference.empty()) os << "reference = " << state_list(sc.states, p.reference, false) << '\n';
        if (p.kind == "entropic" || p.theta != 0.0) os << "theta = " << num(p.theta) << '\n';
        if (p.offset != 0.0) os << "offset = " << num(p.offset) << '\n';
    }
    for (const auto& f : sc.families) {
        os << "\n[family " << f.name << "]\nkind = " << f.kind << "\nmembers =";
        for (const auto& m : f.members) os << ' ' << m;
        os << '\n';
    }
    for (const auto& f : sc.functionals) {
        os << "\n[functional " << f.name << "]\nkind = " << f.kind << '\n';
        for (const auto& [k, v] : f.params) os << k << " = " << v << '\n';
        if (!f.declared.empty()) {
            os << "declare =";
            for (const auto& d : f.declared) os << ' ' << d;
            os << '\n';
        }
    }
    return os.str();
}

} // namespace ambig
