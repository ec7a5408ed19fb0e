#include "ambig/commands.hpp"

#include "ambig/ambiguity.hpp"
#include "ambig/crosscheck.hpp"
#include "ambig/errors.hpp"
#include "ambig/extension.hpp"
#include "ambig/functionals.hpp"
#include "ambig/games.hpp"
#include "ambig/maximal.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace ambig {

namespace {

std::string num(double v) {
    if (v == 0.0) v = 0.0; // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string num(const ExtendedReal& v) { return v.is_finite() ? num(v.value()) : std::string("inf"); }

std::string vec(std::span<const double> v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + num(v[i]);
    return out + ")";
}

class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string render(bool csv) const {
        std::ostringstream os;
        if (csv) {
            auto line = [&](const std::vector<std::string>& r) {
                for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
                os << '\n';
            };
            line(header_);
            for (const auto& r : rows_) line(r);
            return os.str();
        }
        std::vector<std::size_t> width(header_.size(), 0);
        auto measure = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
        };
        measure(header_);
        for (const auto& r : rows_) measure(r);
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                os << r[i];
                if (i + 1 < r.size()) os << std::string(width[i] - r[i].size() + 2, ' ');
            }
            os << '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        return os.str();
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string header(const std::string& verb, const CommandOptions& o, std::uint64_t budget) {
    return "# " + verb + " seed=" + std::to_string(o.seed) + " budget=" + std::to_string(budget) + "\n";
}

const std::string& arg(const CommandOptions& o, std::size_t i, const char* what) {
    if (i >= o.args.size()) throw InputError(std::string("missing argument: ") + what);
    return o.args[i];
}

Vector parse_list(const std::string& text, std::size_t n, const char* what) {
    Vector out;
    std::size_t i = 0;
    while (i <= text.size()) {
        std::size_t j = text.find(',', i);
        if (j == std::string::npos) j = text.size();
        std::string item = text.substr(i, j - i);
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
            throw InputError(std::string(what) + ": '" + item + "' is not a number");
        out.push_back(v);
        i = j + 1;
    }
    if (out.size() != n)
        throw InputError(std::string(what) + " needs " + std::to_string(n) + " entries, got " + std::to_string(out.size()));
    return out;
}

const FunctionalDecl& decl_of(const Scenario& sc, const std::string& name) {
    for (const auto& d : sc.functionals)
        if (d.name == name) return d;
    throw InputError("unknown functional '" + name + "'");
}

PreferenceHandle handle(const Scenario& sc, const std::string& name) {
    return PreferenceHandle(sc.functional(name), sc.range());
}

std::vector<std::string> functional_names(const Scenario& sc, const CommandOptions& o, std::size_t first) {
    std::vector<std::string> names(o.args.begin() + static_cast<std::ptrdiff_t>(std::min(first, o.args.size())),
                                   o.args.end());
    if (names.empty())
        for (const auto& d : sc.functionals) names.push_back(d.name);
    if (names.empty()) throw InputError("scenario declares no functionals");
    return names;
}

std::string witness_text(const std::optional<Vector>& w) { return w ? vec(*w) : std::string("-"); }

// ---------------------------------------------------------------------------

CommandResult eval(const Scenario& sc, const CommandOptions& o) {
    const auto names = functional_names(sc, o, 0);
    std::vector<PreferenceFunctional> fs;
    for (const auto& n : names) fs.push_back(sc.functional(n));
    std::vector<std::string> cols{"act"};
    for (const auto& n : names) {
        cols.push_back(n);
        if (o.oracle) {
            cols.push_back(n + "_oracle");
            cols.push_back(n + "_flag");
        }
    }
    Table t(cols);
    bool flagged = false;
    for (const auto& a : sc.acts) {
        const UtilityVector phi = sc.utility_of(a.name);
        std::vector<std::string> row{a.name};
        for (const auto& f : fs) {
            if (!o.oracle) {
                row.push_back(num(f(phi)));
                continue;
            }
            const OracleCheck c = check_against_oracle(f, phi, sc.settings.derived_tolerance);
            row.push_back(num(c.value));
            row.push_back(c.oracle ? num(*c.oracle) : "n/a");
            row.push_back(c.flagged ? "DISCREPANCY" : "ok");
            flagged = flagged || c.flagged;
        }
        t.add(std::move(row));
    }
    return {flagged ? exit_discrepancy : exit_ok, header("eval", o, 0) + t.render(o.csv)};
}

CommandResult game(const Scenario& sc, const CommandOptions& o) {
    const std::string& name = arg(o, 0, "functional");
    const FunctionalDecl& d = decl_of(sc, name);
    const PreferenceFunctional f = sc.functional(name);
    const bool averse = d.kind == "ib_averse" || d.kind == "leader_averse";
    std::vector<std::string> member_names = sc.family(d.params.at("family")).members;
    PenaltyFamily penalties = [&] {
        if (d.kind == "leader_seeking" || d.kind == "leader_averse") return sc.penalty_family(d.params.at("family"));
        if (d.kind == "ib_seeking" || d.kind == "ib_averse") {
            std::vector<PenaltyFunction> members;
            for (const CredalFamily fam = sc.credal_family(d.params.at("family")); const auto& set : fam.members)
                members.push_back(PenaltyFunction::indicator(set));
            return PenaltyFamily(std::move(members));
        }
        throw InputError("game needs a leader/follower functional, '" + name + "' is " + d.kind);
    }();
    std::vector<std::string> cols{"act", "leader", "follower", "value", "saddle", "maxmin", "minmax"};
    if (o.oracle) {
        cols.push_back("oracle");
        cols.push_back("flag");
    }
    Table t(cols);
    bool flagged = false;
    for (const auto& a : sc.acts) {
        const UtilityVector phi = sc.utility_of(a.name);
        LeaderValue lv = [&] {
            if (d.kind == "leader_seeking") return leader_seeking_value(phi, penalties);
            if (d.kind == "leader_averse") return leader_averse_value(phi, penalties);
            const CredalFamily fam = sc.credal_family(d.params.at("family"));
            return d.kind == "ib_seeking" ? ib_seeking_value(phi, fam) : ib_averse_value(phi, fam);
        }();
        // The averse game at phi is the seeking game at -phi with signs flipped.
        const SaddleReport s = averse ? saddle_check_penalties(negated(phi), penalties, sc.settings.derived_tolerance)
                                      : saddle_check_penalties(phi, penalties, sc.settings.derived_tolerance);
        const std::string lo = !averse ? num(s.maxmin) : s.minmax.is_finite() ? num(-s.minmax.value()) : "-inf";
        const std::string hi = averse ? num(-s.maxmin) : num(s.minmax);
        std::vector<std::string> row{a.name,
                                     member_names.at(lv.leader),
                                     vec(lv.follower.values()),
                                     num(lv.value),
                                     s.has_value ? "yes" : "no",
                                     lo,
                                     hi};
        if (o.oracle) {
            const OracleCheck c = compare_values(lv.value, functional_oracle(f, phi), sc.settings.derived_tolerance);
            row.push_back(c.oracle ? num(*c.oracle) : "n/a");
            row.push_back(c.flagged ? "DISCREPANCY" : "ok");
            flagged = flagged || c.flagged;
        }
        t.add(std::move(row));
    }
    return {flagged ? exit_discrepancy : exit_ok, header("game", o, 0) + t.render(o.csv)};
}

CommandResult member(const Scenario& sc, const CommandOptions& o) {
    const std::string& kind = arg(o, 0, "pstar|qstar|cstar|bstar");
    const std::string& object = arg(o, 1, "credal set or penalty");
    const std::string& name = arg(o, 2, "functional");
    const PreferenceFunctional f = sc.functional(name);
    const double tol = sc.settings.tolerance;
    MembershipResult r;
    std::optional<bool> exact_verdict;
    if (kind == "pstar" || kind == "qstar") {
        const CredalSet set = sc.credal_set(object);
        if (o.exact || o.oracle) {
            exact_verdict = kind == "pstar" ? exact_pstar_member(set, f) : exact_qstar_member(set, f);
            if (!exact_verdict && o.exact)
                throw CapabilityError("no exact membership test for " + f.describe());
        }
        if (o.exact) {
            r.member = *exact_verdict;
            r.exact = true;
        } else {
            const PreferenceHandle h(f, sc.range());
            r = kind == "pstar" ? pstar_member_generic(set, h, o.trials, o.seed, tol)
                                : qstar_member_generic(set, h, o.trials, o.seed, tol);
        }
    } else if (kind == "cstar" || kind == "bstar") {
        const PenaltyFunction pen = sc.penalty(object);
        if (const auto* v = std::get_if<recipe::Variational>(&f.recipe())) {
            r = kind == "cstar" ? vp_cstar_member(pen, v->penalty, o.unbounded, sc.range(), o.trials, o.seed, o.grid, tol)
                                : vp_bstar_member(pen, v->penalty, o.unbounded, sc.range(), o.trials, o.seed, tol);
        } else {
            if (o.exact) throw CapabilityError("no exact penalty membership test for " + f.describe());
            const PreferenceHandle h(f, sc.range());
            r = kind == "cstar" ? cstar_member_generic(pen, h, o.trials, o.seed, tol)
                                : bstar_member_generic(pen, h, o.trials, o.seed, tol);
        }
    } else {
        throw InputError("member kind must be pstar, qstar, cstar or bstar, got '" + kind + "'");
    }
    std::vector<std::string> cols{"kind", "object", "functional", "member", "exact", "witness", "violation", "trials"};
    if (o.oracle) {
        cols.push_back("exact_verdict");
        cols.push_back("flag");
    }
    Table t(cols);
    std::vector<std::string> row{kind, object, name, r.member ? "yes" : "no", r.exact ? "yes" : "no",
                                 witness_text(r.witness), num(r.violation), std::to_string(r.trials)};
    // A sampled witness against an exact member, or an exact non-member passing
    // a sampled run, is reported side by side. Only the former is a contradiction.
    bool flagged = false;
    if (o.oracle) {
        row.push_back(exact_verdict ? (*exact_verdict ? "yes" : "no") : "n/a");
        flagged = exact_verdict && *exact_verdict && !r.member;
        row.push_back(flagged ? "DISCREPANCY" : "ok");
    }
    t.add(std::move(row));
    const int code = flagged ? exit_discrepancy : r.member ? exit_ok : exit_refuted;
    return {code, header("member", o, r.exact ? 0 : r.budget) + t.render(o.csv)};
}

CommandResult compare(const Scenario& sc, const CommandOptions& o) {
    const std::string& a = arg(o, 0, "first functional");
    const std::string& b = arg(o, 1, "second functional");
    const ComparisonResult r = more_averse(handle(sc, a), handle(sc, b), o.trials, o.seed, sc.settings.tolerance);
    Table t({"more_averse", "than", "holds", "witness", "violation", "trials"});
    t.add({a, b, r.holds ? "yes" : "no", witness_text(r.witness), num(r.violation), std::to_string(r.trials)});
    return {r.holds ? exit_ok : exit_refuted, header("compare", o, r.budget) + t.render(o.csv)};
}

CommandResult averse(const Scenario& sc, const CommandOptions& o) {
    const std::string& name = arg(o, 0, "functional");
    const PreferenceHandle h = handle(sc, name);
    const AversionResult r = is_ambiguity_averse(h, o.trials, o.seed, sc.settings.derived_tolerance);
    std::string text = header("averse", o, r.budget);
    Table t({"functional", "averse", "benchmark", "rounds", "trials"});
    t.add({name, r.averse ? "yes" : "no", r.benchmark ? vec(r.benchmark->values()) : "-", std::to_string(r.rounds),
           std::to_string(r.trials)});
    text += t.render(o.csv);
    if (r.certificate) {
        const auto& c = *r.certificate;
        Table ct({"profile", "value", "weight"});
        for (std::size_t i = 0; i < c.profiles.size(); ++i) ct.add({vec(c.profiles[i]), num(c.values[i]), num(c.weights[i])});
        text += (o.csv ? "" : "\n") + std::string("# certificate margin=") + num(c.margin) +
                " verified=" + (verify_certificate(c, h) ? "yes" : "no") + "\n";
        text += ct.render(o.csv);
    }
    return {r.averse ? exit_ok : exit_refuted, text};
}

CommandResult extend(const Scenario& sc, const CommandOptions& o) {
    const std::string& name = arg(o, 0, "functional");
    if (!o.psi) throw InputError("extend needs --psi");
    const PreferenceFunctional f = sc.functional(name);
    const Vector psi = parse_list(*o.psi, f.dimension(), "--psi");
    const ExtensionResult r = extend_niveloid(f, sc.range(), psi);
    std::vector<std::string> cols{"functional", "psi", "value", "argument", "search_gain", "on_domain"};
    if (o.oracle) {
        cols.push_back("grid_sup");
        cols.push_back("flag");
    }
    Table t(cols);
    std::vector<std::string> row{name, vec(psi), num(r.value), vec(r.argument), num(r.search_gain),
                                 r.on_domain ? "yes" : "no"};
    bool flagged = false;
    if (o.oracle) {
        // The grid only bounds the supremum from below.
        const double grid = extension_grid_oracle(f, sc.range(), psi, o.grid);
        const OracleCheck c = compare_values(r.value, grid, sc.settings.derived_tolerance);
        flagged = c.flagged && grid > r.value;
        row.push_back(num(grid));
        row.push_back(flagged ? "DISCREPANCY" : "ok");
    }
    t.add(std::move(row));
    return {flagged ? exit_discrepancy : exit_ok, header("extend", o, o.oracle ? o.grid : 0) + t.render(o.csv)};
}

CommandResult conjugate(const Scenario& sc, const CommandOptions& o) {
    const std::string& name = arg(o, 0, "functional");
    if (!o.p) throw InputError("conjugate needs --p");
    const PreferenceFunctional f = sc.functional(name);
    const ProbabilityVector p(parse_list(*o.p, f.dimension(), "--p"), sc.settings.tolerance);
    ConjugateSearch search;
    search.seed = o.seed;
    search.samples = o.trials;
    const ConjugateResult r = conjugate_penalty(f, sc.range(), p.values(), search);
    Table t({"functional", "p", "value", "exact", "maximizer", "evaluations"});
    t.add({name, vec(p.values()), num(r.value), r.exact ? "yes" : "no", witness_text(r.maximizer),
           std::to_string(r.evaluations)});
    return {exit_ok, header("conjugate", o, r.exact ? 0 : o.trials) + t.render(o.csv)};
}

CommandResult check(const Scenario& sc, const CommandOptions& o) {
    const auto names = functional_names(sc, o, 0);
    static const Property properties[] = {Property::monotone, Property::translation_invariant,
                                          Property::positively_homogeneous, Property::concave,
                                          Property::convex, Property::normalized};
    auto flag_of = [](const Flags& f, Property p) {
        switch (p) {
        case Property::monotone: return f.monotone;
        case Property::translation_invariant: return f.translation_invariant;
        case Property::positively_homogeneous: return f.positively_homogeneous;
        case Property::concave: return f.concave;
        case Property::convex: return f.convex;
        case Property::normalized: return f.normalized;
        }
        return Flag::unknown;
    };
    Table t({"functional", "property", "claimed", "checked", "verdict", "witness", "violation"});
    bool refuted = false;
    for (const auto& name : names) {
        const PreferenceFunctional f = sc.functional(name);
        const NiveloidReport rep = check_niveloid(f, sc.range(), o.trials, o.seed, sc.settings.tolerance);
        for (Property p : properties) {
            const Flag claimed = flag_of(f.flags(), p);
            const Flag found = flag_of(rep.flags, p);
            const bool broken = claimed == Flag::asserted && found == Flag::refuted;
            refuted = refuted || broken;
            const PropertyWitness* w = rep.witness(p);
            std::string witness = "-";
            if (w) witness = w->second.empty() ? vec(w->first) : vec(w->first) + " vs " + vec(w->second);
            t.add({name, to_string(p), to_string(claimed), to_string(found), broken ? "CLAIM REFUTED" : "ok", witness,
                   w ? num(w->violation) : "-"});
        }
    }
    return {refuted ? exit_refuted : exit_ok, header("check", o, o.trials) + t.render(o.csv)};
}

} // namespace

const std::vector<std::string>& command_verbs() {
    static const std::vector<std::string> verbs{"eval",   "game",   "member",    "compare",
                                                "averse", "extend", "conjugate", "check"};
    return verbs;
}

CommandResult run_command(const std::string& verb, const Scenario& scenario, const CommandOptions& options) {
    try {
        if (verb == "eval") return eval(scenario, options);
        if (verb == "game") return game(scenario, options);
        if (verb == "member") return member(scenario, options);
        if (verb == "compare") return compare(scenario, options);
        if (verb == "averse") return averse(scenario, options);
        if (verb == "extend") return extend(scenario, options);
        if (verb == "conjugate") return conjugate(scenario, options);
        if (verb == "check") return check(scenario, options);
        return {exit_input, "error: unknown verb '" + verb + "'\n"};
    } catch (const CapabilityError& e) {
        return {exit_capability, std::string("capability error: ") + e.what() + "\n"};
    } catch (const EmptySetError& e) {
        return {exit_input, std::string("input error: ") + e.what() + "\n"};
    } catch (const std::invalid_argument& e) {
        return {exit_input, std::string("input error: ") + e.what() + "\n"};
    } catch (const std::out_of_range& e) {
        return {exit_input, std::string("input error: ") + e.what() + "\n"};
    } catch (const std::exception& e) {
        return {exit_internal, std::string("internal error: ") + e.what() + "\n"};
    }
}

} // namespace ambig
