#include "ivbounds/closed_form.hpp"

#include "ivbounds/error.hpp"

#include <algorithm>
#include <initializer_list>

namespace ivbounds {

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) throw Error(ErrorCode::InvalidArgument, "interval endpoints cross: [" + lo_.pretty() + ", " + hi_.pretty() + "]");
}

std::string Interval::to_string(int max_digits) const {
    return "[" + lo_.pretty(max_digits) + ", " + hi_.pretty(max_digits) + "]";
}

bool BoundsReport::feasible() const {
    return std::all_of(means.begin(), means.end(), [](const auto& m) { return m.has_value(); });
}

std::vector<std::vector<int>> zstar_from_p(const ObservedDistribution& p) {
    const int nd = p.spaces().n_treatments(), nz = p.spaces().n_instruments();
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(nd));
    for (int d = 0; d < nd; ++d) {
        Rational best = treatment_prob(p, d, 0);
        sets[d] = {0};
        for (int z = 1; z < nz; ++z) {
            Rational v = treatment_prob(p, d, z);
            if (v > best) {
                best = v;
                sets[d] = {z};
            } else if (v == best) {
                sets[d].push_back(z);
            }
        }
    }
    return sets;
}

Interval gm_interval(const ObservedDistribution& p, int d, int z) {
    const Rational b = beta(p, d, z);
    const Rational rest = Rational(1) - treatment_prob(p, d, z);
    return {b + p.spaces().y_lower() * rest, b + p.spaces().y_upper() * rest};
}

namespace {

std::vector<int> resolve_zstar(const ObservedDistribution& p, const std::optional<std::vector<int>>& zstar) {
    const int nd = p.spaces().n_treatments(), nz = p.spaces().n_instruments();
    if (!zstar) {
        std::vector<int> out;
        for (const auto& s : zstar_from_p(p)) out.push_back(s.front());
        return out;
    }
    if (zstar->size() != static_cast<std::size_t>(nd))
        throw Error(ErrorCode::DimensionMismatch, "zstar map needs one entry per treatment");
    for (int z : *zstar)
        if (z < 0 || z >= nz) throw Error(ErrorCode::IndexOutOfRange, "zstar entry " + std::to_string(z));
    return *zstar;
}

}  // namespace

BoundsReport gm_bounds(const ObservedDistribution& p, const std::optional<std::vector<int>>& zstar) {
    BoundsReport r;
    r.method = "closed_form_gm";
    r.zstar = resolve_zstar(p, zstar);
    r.zstar_sets = zstar_from_p(p);
    for (int d = 0; d < p.spaces().n_treatments(); ++d) r.means.emplace_back(gm_interval(p, d, r.zstar[d]));
    return r;
}

Interval ate_bounds(const ObservedDistribution& p, int j, int k, const std::optional<std::vector<int>>& zstar) {
    const int nd = p.spaces().n_treatments();
    if (j < 0 || j >= nd || k < 0 || k >= nd) throw Error(ErrorCode::IndexOutOfRange, "ATE treatment index");
    if (j == k) throw Error(ErrorCode::SameTreatment, "ATE needs j != k");
    auto zs = resolve_zstar(p, zstar);
    Interval a = gm_interval(p, j, zs[j]), b = gm_interval(p, k, zs[k]);
    return {a.lo() - b.hi(), a.hi() - b.lo()};
}

BoundsReport mi_bounds(const ObservedDistribution& p) {
    BoundsReport r;
    r.method = "closed_form_mi";
    r.zstar_sets = zstar_from_p(p);
    for (int d = 0; d < p.spaces().n_treatments(); ++d) {
        Interval first = gm_interval(p, d, 0);
        Rational lo = first.lo(), hi = first.hi();
        for (int z = 1; z < p.spaces().n_instruments(); ++z) {
            Interval iv = gm_interval(p, d, z);
            lo = max(lo, iv.lo());
            hi = min(hi, iv.hi());
        }
        if (hi < lo)
            r.means.emplace_back(std::nullopt);
        else
            r.means.emplace_back(Interval(lo, hi));
    }
    return r;
}

namespace {

Rational max_of(std::initializer_list<Rational> xs) { return *std::max_element(xs.begin(), xs.end()); }
Rational min_of(std::initializer_list<Rational> xs) { return *std::min_element(xs.begin(), xs.end()); }

bool binary_outcomes(const ProblemSpaces& sp) {
    return sp.n_outcomes() == 2 && sp.y_lower() == 0 && sp.y_upper() == 1;
}

// Interval that throws the right error when a formula's endpoints cross (P not rationalizable).
Interval checked(const Rational& lo, const Rational& hi, const char* what) {
    if (hi < lo)
        throw Error(ErrorCode::Infeasible, std::string(what) + " endpoints cross: " + lo.pretty() + " > " + hi.pretty());
    return {lo, hi};
}

}  // namespace

BinaryBounds balke_pearl_bounds(const ObservedDistribution& p) {
    if (!p.spaces().is_binary()) throw Error(ErrorCode::NotBinaryProblem, "requires Y = {0,1} and |D| = |Z| = 2");
    // p(y, d, z) = p_{yd|z}
    auto q = [&](int y, int d, int z) { return p(z, d, y); };
    Interval y0 = checked(max_of({q(1, 0, 1), q(1, 0, 0), q(1, 0, 0) + q(1, 1, 0) - q(0, 0, 1) - q(1, 1, 1),
                                  q(0, 1, 0) + q(1, 0, 0) - q(0, 0, 1) - q(0, 1, 1)}),
                          min_of({1 - q(0, 0, 1), 1 - q(0, 0, 0), q(0, 1, 0) + q(1, 0, 0) + q(1, 0, 1) + q(1, 1, 1),
                                  q(1, 0, 0) + q(1, 1, 0) + q(0, 1, 1) + q(1, 0, 1)}),
                          "Y0");
    Interval y1 = checked(max_of({q(1, 1, 0), q(1, 1, 1), -q(0, 0, 0) - q(0, 1, 0) + q(0, 0, 1) + q(1, 1, 1),
                                  -q(0, 1, 0) - q(1, 0, 0) + q(1, 0, 1) + q(1, 1, 1)}),
                          min_of({1 - q(0, 1, 1), 1 - q(0, 1, 0), q(0, 0, 0) + q(1, 1, 0) + q(1, 0, 1) + q(1, 1, 1),
                                  q(1, 0, 0) + q(1, 1, 0) + q(0, 0, 1) + q(1, 1, 1)}),
                          "Y1");
    return {y0, y1};
}

Interval ordered_middle_bounds(const ObservedDistribution& p) {
    const auto& sp = p.spaces();
    if (!binary_outcomes(sp) || sp.n_treatments() != 3 || sp.n_instruments() != 3)
        throw Error(ErrorCode::IncompatibleSpaces, "requires Y = {0,1} and |D| = |Z| = 3");
    auto p11 = [&](int z) { return p(z, 1, 1); };
    auto p01 = [&](int z) { return p(z, 1, 0); };
    return checked(max_of({p11(0), p11(1), p11(2), p11(0) - p11(1) + p11(2)}),
                   min_of({1 - p01(2), 1 - p01(1), 1 - p01(0), 1 - p01(0) + p01(1) - p01(2)}), "E[Y1]");
}

Interval arum3_y0_bounds(const ObservedDistribution& p) {
    const auto& sp = p.spaces();
    if (!binary_outcomes(sp) || sp.n_treatments() != 3 || sp.n_instruments() != 2)
        throw Error(ErrorCode::IncompatibleSpaces, "requires Y = {0,1}, |D| = 3 and |Z| = 2");
    return checked(max(p(0, 0, 1), p(1, 0, 1)), min(1 - p(1, 0, 0), 1 - p(0, 0, 0)), "E[Y0]");
}

std::pair<Rational, Rational> point_identify_compliers_defiers(const ObservedDistribution& p) {
    if (!p.spaces().is_binary()) throw Error(ErrorCode::NotBinaryProblem, "requires Y = {0,1} and |D| = |Z| = 2");
    return {p(0, 0, 1) + p(1, 0, 1), p(0, 1, 1) + p(1, 1, 1)};
}

}  // namespace ivbounds
