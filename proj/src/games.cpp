#include "ambig/games.hpp"

#include "ambig/errors.hpp"
#include "ambig/program.hpp"

#include <cmath>

namespace ambig {

namespace {

bool better(double candidate, double incumbent, bool maximize) {
    const double margin = 1e-12 * (1.0 + std::abs(incumbent));
    return maximize ? candidate > incumbent + margin : candidate < incumbent - margin;
}

template <class Members, class Inner>
LeaderValue outer(const Members& members, bool maximize, Inner inner) {
    std::optional<LeaderValue> best;
    for (std::size_t i = 0; i < members.size(); ++i) {
        Extremum e = inner(members[i]);
        if (!best || better(e.value, best->value, maximize)) best = LeaderValue{e.value, i, std::move(e.argument)};
    }
    return *best;
}

} // namespace

LeaderValue leader_seeking_value(std::span<const double> phi, const PenaltyFamily& C) {
    return outer(C.members, true, [&](const PenaltyFunction& c) { return variational_value(phi, c); });
}

LeaderValue leader_averse_value(std::span<const double> phi, const PenaltyFamily& B) {
    return outer(B.members, false, [&](const PenaltyFunction& b) { return seeking_variational_value(phi, b); });
}

LeaderValue ib_seeking_value(std::span<const double> phi, const CredalFamily& Ps) {
    return outer(Ps.members, true, [&](const CredalSet& P) { return maxmin_eu(phi, P); });
}

LeaderValue ib_averse_value(std::span<const double> phi, const CredalFamily& Qs) {
    return outer(Qs.members, false, [&](const CredalSet& Q) { return maxmax_eu(phi, Q); });
}

PreferenceFunctional make_ib_seeking(CredalFamily Ps) {
    const std::size_t n = Ps.members.front().dimension();
    auto eval = [Ps](std::span<const double> phi) { return ib_seeking_value(phi, Ps).value; };
    const Flag yes = Flag::asserted;
    return {n, eval, Flags{yes, yes, yes, Flag::unknown, Flag::unknown, yes}, recipe::IbSeeking{std::move(Ps)}};
}

PreferenceFunctional make_ib_averse(CredalFamily Qs) {
    const std::size_t n = Qs.members.front().dimension();
    auto eval = [Qs](std::span<const double> phi) { return ib_averse_value(phi, Qs).value; };
    const Flag yes = Flag::asserted;
    return {n, eval, Flags{yes, yes, yes, Flag::unknown, Flag::unknown, yes}, recipe::IbAverse{std::move(Qs)}};
}

PreferenceFunctional make_leader_seeking(PenaltyFamily C) {
    const std::size_t n = C.members.front().dimension();
    const Flag normalized = is_grounded(C).grounded ? Flag::asserted : Flag::refuted;
    auto eval = [C](std::span<const double> phi) { return leader_seeking_value(phi, C).value; };
    const Flag yes = Flag::asserted;
    return {n, eval, Flags{yes, yes, Flag::unknown, Flag::unknown, Flag::unknown, normalized},
            recipe::LeaderSeeking{std::move(C)}};
}

PreferenceFunctional make_leader_averse(PenaltyFamily B) {
    const std::size_t n = B.members.front().dimension();
    const Flag normalized = is_grounded(B).grounded ? Flag::asserted : Flag::refuted;
    auto eval = [B](std::span<const double> phi) { return leader_averse_value(phi, B).value; };
    const Flag yes = Flag::asserted;
    return {n, eval, Flags{yes, yes, Flag::unknown, Flag::unknown, Flag::unknown, normalized},
            recipe::LeaderAverse{std::move(B)}};
}

SaddleReport saddle_check_penalties(std::span<const double> phi, const PenaltyFamily& C, double tol) {
    SaddleReport report;
    report.maxmin = leader_seeking_value(phi, C).value;
    const ProgramSolution sol = PenaltyProgram(phi.size()).add_linear(phi).add_envelope(C.members).minimize();
    report.minmax = sol.value;
    report.minmax_argument = sol.argument;
    report.accuracy = sol.gap;
    report.has_value = sol.value.is_finite() && std::abs(sol.value.value() - report.maxmin) <= tol + sol.gap;
    return report;
}

const char* to_string(Collapse c) {
    switch (c) {
    case Collapse::maxmin: return "maxmin";
    case Collapse::maxmax: return "maxmax";
    case Collapse::seu: return "seu";
    default: return "none";
    }
}

CollapseReport collapse_detect(const CredalFamily& Ps, std::span<const Vector> sample_phis, double tol) {
    CollapseReport report;
    report.intersection_empty = !common_point(Ps.members).has_value();
    std::vector<double> values;
    for (const auto& phi : sample_phis) values.push_back(ib_seeking_value(phi, Ps).value);

    bool maxmin = !report.intersection_empty;
    if (maxmin) {
        for (std::size_t i = 0; i < sample_phis.size(); ++i) {
            const double target = optimize_over_intersection(Ps.members, sample_phis[i], false)->value;
            const double gap = std::abs(values[i] - target);
            if (gap > tol * (1.0 + std::abs(target))) {
                maxmin = false;
                report.maxmin_witness = sample_phis[i];
                report.maxmin_discrepancy = gap;
                break;
            }
        }
    }

    bool maxmax = true;
    for (std::size_t i = 0; i < sample_phis.size() && maxmax; ++i)
        for (std::size_t j = i + 1; j < sample_phis.size() && maxmax; ++j) {
            Vector mid(sample_phis[i].size());
            for (std::size_t s = 0; s < mid.size(); ++s) mid[s] = 0.5 * (sample_phis[i][s] + sample_phis[j][s]);
            const double chord = 0.5 * (values[i] + values[j]);
            if (ib_seeking_value(mid, Ps).value > chord + tol * (1.0 + std::abs(chord))) {
                maxmax = false;
                report.maxmax_witness = std::make_pair(sample_phis[i], sample_phis[j]);
            }
        }

    report.kind = maxmin && maxmax ? Collapse::seu : maxmin ? Collapse::maxmin : maxmax ? Collapse::maxmax
                                                                                       : Collapse::none;
    return report;
}

} // namespace ambig
