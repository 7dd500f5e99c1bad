#include "ivbounds/arum.hpp"

#include "ivbounds/error.hpp"
#include "ivbounds/simplex.hpp"

#include <algorithm>
#include <set>

namespace ivbounds {

ArumSpec::ArumSpec(ProblemSpaces sp, std::vector<std::vector<Rational>> table, bool full_support)
    : spaces(std::move(sp)), g(std::move(table)), full_support_noise(full_support) {
    if (g.size() != static_cast<std::size_t>(spaces.n_instruments()))
        throw Error(ErrorCode::DimensionMismatch, "g needs one row per instrument value");
    for (const auto& row : g)
        if (row.size() != static_cast<std::size_t>(spaces.n_treatments()))
            throw Error(ErrorCode::DimensionMismatch, "g needs one column per treatment");
}

ArumSpec strict_targeting_spec(const ProblemSpaces& spaces, const std::map<int, int>& targets,
                               const std::vector<Rational>& upper, const std::vector<Rational>& lower) {
    const int nd = spaces.n_treatments(), nz = spaces.n_instruments();
    if (upper.size() != static_cast<std::size_t>(nd) || lower.size() != static_cast<std::size_t>(nd))
        throw Error(ErrorCode::DimensionMismatch, "upper/lower need one entry per treatment");
    std::vector<std::vector<Rational>> g(static_cast<std::size_t>(nz), lower);
    for (auto [d, z] : targets) {
        if (d < 0 || d >= nd || z < 0 || z >= nz) throw Error(ErrorCode::IndexOutOfRange, "target pair");
        if (!(lower[d] < upper[d])) throw Error(ErrorCode::InvalidArgument, "targeted treatment needs upper > lower");
        g[z][d] = upper[d];
    }
    return ArumSpec(spaces, std::move(g));
}

bool UniformTargeting::holds() const {
    return std::all_of(zstar.begin(), zstar.end(), [](const auto& z) { return z.has_value(); });
}

std::vector<int> UniformTargeting::failing() const {
    std::vector<int> out;
    for (std::size_t d = 0; d < zstar.size(); ++d)
        if (!zstar[d]) out.push_back(static_cast<int>(d));
    return out;
}

UniformTargeting uniform_targeting_check(const ArumSpec& a) {
    const int nd = a.spaces.n_treatments(), nz = a.spaces.n_instruments();
    UniformTargeting out;
    for (int d = 0; d < nd; ++d) {
        std::optional<int> found;
        for (int zs = 0; zs < nz && !found; ++zs) {
            bool ok = true;
            for (int d2 = 0; d2 < nd && ok; ++d2) {
                if (d2 == d) continue;
                Rational gap = a.g[zs][d] - a.g[zs][d2];
                for (int z = 0; z < nz && ok; ++z)
                    if (z != zs && !(gap > a.g[z][d] - a.g[z][d2])) ok = false;
            }
            if (ok) found = zs;
        }
        out.zstar.push_back(found);
    }
    return out;
}

std::string to_string(TargetingKind kind) {
    switch (kind) {
        case TargetingKind::Uniform: return "uniform";
        case TargetingKind::StrictOneToOne: return "strict_one_to_one";
        case TargetingKind::Neither: return "neither";
    }
    return "neither";
}

namespace {

// Splits treatments into peaked-once and constant columns; kind stays Neither.
TargetingReport targeting_shape(const ArumSpec& a) {
    const int nd = a.spaces.n_treatments(), nz = a.spaces.n_instruments();
    TargetingReport r;
    auto fail = [&](std::string why) {
        r.kind = TargetingKind::Neither;
        r.targets.clear();
        r.untargeted.clear();
        r.reason = std::move(why);
        return r;
    };
    std::set<int> used;
    for (int d = 0; d < nd; ++d) {
        std::set<Rational> values;
        for (int z = 0; z < nz; ++z) values.insert(a.g[z][d]);
        if (values.size() == 1) {
            r.untargeted.push_back(d);
            continue;
        }
        if (values.size() > 2) return fail("treatment " + std::to_string(d) + " takes more than two shifter values");
        const Rational& peak = *values.rbegin();
        std::vector<int> at_peak;
        for (int z = 0; z < nz; ++z)
            if (a.g[z][d] == peak) at_peak.push_back(z);
        if (at_peak.size() != 1)
            return fail("treatment " + std::to_string(d) + " is raised at more than one instrument value");
        if (!used.insert(at_peak.front()).second)
            return fail("instrument value " + std::to_string(at_peak.front()) + " targets two treatments");
        r.targets[d] = at_peak.front();
    }
    return r;
}

}  // namespace

TargetingReport strict_one_to_one_check(const ArumSpec& a) {
    TargetingReport r = targeting_shape(a);
    if (!r.reason.empty()) return r;
    if (r.targets.empty()) r.reason = "no targeted treatment";
    else if (r.untargeted.empty()) r.reason = "every treatment is targeted";
    else r.kind = TargetingKind::StrictOneToOne;
    if (r.kind == TargetingKind::Neither) {
        r.targets.clear();
        r.untargeted.clear();
    }
    return r;
}

TargetingReport classify_targeting(const ArumSpec& a) {
    auto u = uniform_targeting_check(a);
    if (u.holds()) {
        TargetingReport r;
        r.kind = TargetingKind::Uniform;
        for (const auto& z : u.zstar) r.zstar.push_back(*z);
        return r;
    }
    return strict_one_to_one_check(a);
}

bool arum_region_has_interior(const ArumSpec& a, const TreatmentResponseType& rt) {
    validate_treatment_type(rt, a.spaces);
    const int nd = a.spaces.n_treatments(), nz = a.spaces.n_instruments();
    // Columns: u+_k, u-_k for k = 1..nd-1, then s, then one slack per row (the last closes s <= 1).
    const int n_u = 2 * (nd - 1);
    const int s_col = n_u;
    LpProblem lp;
    int slack = s_col + 1;
    auto add_u = [&](std::vector<std::pair<int, Rational>>& row, int d, int sign) {
        if (d == 0) return;
        row.emplace_back(2 * (d - 1), sign);
        row.emplace_back(2 * (d - 1) + 1, -sign);
    };
    for (int z = 0; z < nz; ++z) {
        const int c = rt[z];
        for (int d2 = 0; d2 < nd; ++d2) {
            if (d2 == c) continue;
            // u_d2 - u_c + s + slack = g(z,c) - g(z,d2)
            std::vector<std::pair<int, Rational>> row;
            add_u(row, d2, 1);
            add_u(row, c, -1);
            row.emplace_back(s_col, 1);
            row.emplace_back(slack++, 1);
            lp.add_row(std::move(row), a.g[z][c] - a.g[z][d2]);
        }
    }
    lp.add_row({{s_col, 1}, {slack++, 1}}, 1);
    lp.n_vars = slack;

    ExactSimplex simplex(lp);
    if (!simplex.feasible()) return false;
    std::vector<mpq_class> cost(static_cast<std::size_t>(lp.n_vars));
    cost[s_col] = 1;
    auto sol = simplex.maximize(cost);
    if (sol.status != LpStatus::Optimal) throw Error(ErrorCode::LpFailure, "slack LP did not reach an optimum");
    return sgn(sol.value) > 0;
}

ResponseModel arum_support(const ArumSpec& a, const ArumSupportOptions& options) {
    if (!a.full_support_noise)
        throw Error(ErrorCode::InvalidArgument, "only full-support noise is implemented");
    if (options.reject_all_targeted) {
        auto r = targeting_shape(a);
        if (r.reason.empty() && r.untargeted.empty())
            throw Error(ErrorCode::IncompatibleSpaces, "every treatment is targeted; no untargeted treatment exists");
    }
    return ResponseModel::filter(a.spaces, "arum", [&](const auto& rt) { return arum_region_has_interior(a, rt); });
}

BinaryArumSets binary_arum_zstar(const ArumSpec& a) {
    if (a.spaces.n_treatments() != 2) throw Error(ErrorCode::NotBinaryTreatment, "requires |D| = 2");
    std::vector<Rational> g10;
    for (const auto& row : a.g) g10.push_back(row[1] - row[0]);
    const Rational hi = *std::max_element(g10.begin(), g10.end());
    const Rational lo = *std::min_element(g10.begin(), g10.end());
    BinaryArumSets out;
    for (std::size_t z = 0; z < g10.size(); ++z) {
        if (g10[z] == hi) out.upper.push_back(static_cast<int>(z));
        if (g10[z] == lo) out.lower.push_back(static_cast<int>(z));
    }
    return out;
}

}  // namespace ivbounds
