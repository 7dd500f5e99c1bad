#include "ivbounds/lp_bounds.hpp"

#include "ivbounds/simplex.hpp"

#include <cstdlib>
#include <map>

namespace ivbounds {

BoundsObjective BoundsObjective::mean(int d) { return {Kind::Mean, d, 0, {}}; }
BoundsObjective BoundsObjective::ate(int j, int k) {
    if (j == k) throw Error(ErrorCode::SameTreatment, "ATE needs j != k");
    return {Kind::Ate, j, k, {}};
}
BoundsObjective BoundsObjective::linear(std::vector<Rational> weights) { return {Kind::Linear, 0, 0, std::move(weights)}; }

std::vector<Rational> BoundsObjective::weights(int n_treatments) const {
    auto check = [&](int d) {
        if (d < 0 || d >= n_treatments) throw Error(ErrorCode::IndexOutOfRange, "objective treatment " + std::to_string(d));
    };
    std::vector<Rational> w(static_cast<std::size_t>(n_treatments));
    switch (kind_) {
        case Kind::Mean:
            check(a_);
            w[a_] = 1;
            break;
        case Kind::Ate:
            check(a_);
            check(b_);
            w[a_] = 1;
            w[b_] = -1;
            break;
        case Kind::Linear:
            if (w_.size() != w.size()) throw Error(ErrorCode::DimensionMismatch, "linear objective needs one weight per treatment");
            w = w_;
            break;
    }
    return w;
}

std::string BoundsObjective::label() const {
    switch (kind_) {
        case Kind::Mean: return "E[Y" + std::to_string(a_) + "]";
        case Kind::Ate: return "E[Y" + std::to_string(a_) + " - Y" + std::to_string(b_) + "]";
        case Kind::Linear: {
            std::string s = "linear(";
            for (std::size_t i = 0; i < w_.size(); ++i) s += (i ? "," : "") + w_[i].pretty();
            return s + ")";
        }
    }
    return {};
}

LpCaps LpCaps::from_env() {
    LpCaps caps;
    if (const char* v = std::getenv("IVBOUNDS_MAX_VARS"); v && *v) {
        char* end = nullptr;
        unsigned long long n = std::strtoull(v, &end, 10);
        if (*end != '\0') throw Error(ErrorCode::InvalidArgument, std::string("IVBOUNDS_MAX_VARS is not an integer: ") + v);
        caps.full = caps.reduced = static_cast<std::size_t>(n);
    }
    return caps;
}

namespace {

std::size_t ipow(std::size_t base, int e) {
    std::size_t r = 1;
    while (e-- > 0) r *= base;
    return r;
}

// Outcome entries of -1 mark never-taken treatments (reduced formulation only).
struct Column {
    std::size_t type;
    OutcomeResponseType outcome;
};

struct Formulation {
    LpProblem lp;
    std::vector<Column> columns;
};

std::size_t count_vars(const ResponseModel& model, bool reduced) {
    const auto& sp = model.spaces();
    std::size_t n = 0;
    for (const auto& rt : model.support()) {
        int free = reduced ? static_cast<int>(never_taker_partition(rt, sp.n_treatments()).complied.size()) : sp.n_treatments();
        n += ipow(static_cast<std::size_t>(sp.n_outcomes()), free);
    }
    return n;
}

std::string row_label(int z, int d, int y) {
    return "p[z=" + std::to_string(z) + ",d=" + std::to_string(d) + ",y=" + std::to_string(y) + "]";
}

Formulation build(const ObservedDistribution& p, const ResponseModel& model, bool reduced, const LpCaps& caps) {
    const auto& sp = model.spaces();
    if (!(sp == p.spaces())) throw Error(ErrorCode::IncompatibleSpaces, "model and P use different spaces");
    const std::size_t n = count_vars(model, reduced);
    const std::size_t cap = reduced ? caps.reduced : caps.full;
    if (n > cap)
        throw Error(ErrorCode::EnumerationTooLarge, std::string(reduced ? "reduced" : "full") + " LP needs " +
                                                        std::to_string(n) + " variables, cap is " + std::to_string(cap));
    const int nd = sp.n_treatments(), nz = sp.n_instruments(), ny = sp.n_outcomes();
    const int n_rows = nz * nd * ny + 1;

    Formulation f;
    f.lp.rows.resize(static_cast<std::size_t>(n_rows));
    f.columns.reserve(n);
    for (std::size_t t = 0; t < model.support().size(); ++t) {
        const auto& rt = model.support()[t];
        std::vector<int> free = reduced ? never_taker_partition(rt, nd).complied : std::vector<int>{};
        if (!reduced)
            for (int d = 0; d < nd; ++d) free.push_back(d);
        std::vector<int> outcome(static_cast<std::size_t>(nd), -1);
        for (int d : free) outcome[d] = 0;
        const std::size_t combos = ipow(static_cast<std::size_t>(ny), static_cast<int>(free.size()));
        for (std::size_t c = 0; c < combos; ++c) {
            const int col = static_cast<int>(f.columns.size());
            for (int z = 0; z < nz; ++z) {
                int d = rt[z];
                f.lp.rows[(z * nd + d) * ny + outcome[d]].emplace_back(col, 1);
            }
            f.lp.rows.back().emplace_back(col, 1);
            f.columns.push_back({t, {outcome}});
            for (int i = static_cast<int>(free.size()) - 1; i >= 0; --i) {
                if (++outcome[free[i]] < ny) break;
                outcome[free[i]] = 0;
            }
        }
    }
    f.lp.n_vars = static_cast<int>(f.columns.size());
    for (int z = 0; z < nz; ++z)
        for (int d = 0; d < nd; ++d)
            for (int y = 0; y < ny; ++y) f.lp.rhs.push_back(p(z, d, y));
    f.lp.rhs.emplace_back(1);
    return f;
}

std::vector<std::string> row_labels(const ProblemSpaces& sp) {
    std::vector<std::string> out;
    for (int z = 0; z < sp.n_instruments(); ++z)
        for (int d = 0; d < sp.n_treatments(); ++d)
            for (int y = 0; y < sp.n_outcomes(); ++y) out.push_back(row_label(z, d, y));
    out.emplace_back("total");
    return out;
}

// Value contributed by treatment d of a column: its outcome, or the extreme favouring `lower`.
Rational term(const ProblemSpaces& sp, const Rational& w, int outcome, bool lower) {
    if (outcome >= 0) return w * sp.y(outcome);
    Rational a = w * sp.y_lower(), b = w * sp.y_upper();
    return lower ? min(a, b) : max(a, b);
}

int extreme_index(const ProblemSpaces& sp, const Rational& w, bool lower) {
    bool take_low = (w.sign() >= 0) == lower;
    return take_low ? 0 : sp.n_outcomes() - 1;
}

std::vector<Rational> costs(const Formulation& f, const ProblemSpaces& sp, const std::vector<Rational>& w, bool lower) {
    std::vector<Rational> c;
    c.reserve(f.columns.size());
    for (const auto& col : f.columns) {
        Rational s;
        for (int d = 0; d < sp.n_treatments(); ++d)
            if (!w[d].is_zero()) s += term(sp, w[d], col.outcome[d], lower);
        c.push_back(std::move(s));
    }
    return c;
}

template <class T>
std::vector<T> convert(const std::vector<Rational>& v) {
    std::vector<T> out;
    out.reserve(v.size());
    for (const auto& r : v) out.push_back(ScalarTraits<T>::from(r));
    return out;
}

LatentDistribution to_latent(const Formulation& f, const ResponseModel& model, const std::vector<mpq_class>& x,
                             const std::vector<Rational>& w, bool lower) {
    const auto& sp = model.spaces();
    std::map<LatentCell, Rational> cells;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (sgn(x[j]) == 0) continue;
        OutcomeResponseType ro = f.columns[j].outcome;
        for (int d = 0; d < sp.n_treatments(); ++d)
            if (ro.assignments[d] < 0) ro.assignments[d] = extreme_index(sp, w[d], lower);
        cells[{ro, model.support()[f.columns[j].type]}] += Rational(x[j]);
    }
    return LatentDistribution(sp, std::move(cells));
}

std::vector<CertificateEntry> certificate(const ExactSimplex& s, const ProblemSpaces& sp) {
    auto labels = row_labels(sp);
    std::vector<CertificateEntry> out;
    for (std::size_t i = 0; i < s.farkas().size(); ++i)
        if (sgn(s.farkas()[i]) != 0) out.push_back({labels[i], Rational(s.farkas()[i])});
    return out;
}

Rational evaluate(const LatentDistribution& q, const std::vector<Rational>& w) {
    Rational s;
    for (std::size_t d = 0; d < w.size(); ++d)
        if (!w[d].is_zero()) s += w[d] * q.mean(static_cast<int>(d));
    return s;
}

std::vector<SharpBounds> solve(const ObservedDistribution& p, const ResponseModel& model,
                               const std::vector<BoundsObjective>& objectives, bool reduced, const LpCaps& caps) {
    const auto& sp = model.spaces();
    std::vector<std::vector<Rational>> weights;
    for (const auto& o : objectives) weights.push_back(o.weights(sp.n_treatments()));
    Formulation f = build(p, model, reduced, caps);
    ExactSimplex simplex(f.lp);
    if (!simplex.feasible()) throw InfeasibleModel(model.label(), certificate(simplex, sp));

    // Minimize c_lo and -c_hi for every objective in one warm-started sequence.
    std::vector<std::vector<mpq_class>> all_costs;
    for (const auto& w : weights) {
        all_costs.push_back(convert<mpq_class>(costs(f, sp, w, true)));
        auto hi_cost = convert<mpq_class>(costs(f, sp, w, false));
        for (auto& c : hi_cost) c = -c;
        all_costs.push_back(std::move(hi_cost));
    }
    auto sols = simplex.minimize_many(all_costs);

    std::vector<SharpBounds> out;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const auto& w = weights[i];
        const auto& lo = sols[2 * i];
        auto& hi = sols[2 * i + 1];
        hi.value = -hi.value;
        if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
            throw Error(ErrorCode::LpFailure, "bounded LP reported unbounded");
        SharpBounds b{Interval(Rational(lo.value), Rational(hi.value)), to_latent(f, model, lo.x, w, true),
                      to_latent(f, model, hi.x, w, false)};
        if (evaluate(b.lower_witness, w) != b.interval.lo() || evaluate(b.upper_witness, w) != b.interval.hi() ||
            !(push_forward(b.lower_witness) == p) || !(push_forward(b.upper_witness) == p))
            throw Error(ErrorCode::LpFailure, "endpoint witness failed verification");
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace

std::size_t full_variable_count(const ResponseModel& model) { return count_vars(model, false); }
std::size_t reduced_variable_count(const ResponseModel& model) { return count_vars(model, true); }

ConsistencyResult consistency_check(const ObservedDistribution& p, const ResponseModel& model, const LpCaps& caps) {
    Formulation f = build(p, model, true, caps);
    ExactSimplex simplex(f.lp);
    ConsistencyResult r;
    if (!simplex.feasible()) {
        r.certificate = certificate(simplex, model.spaces());
        return r;
    }
    r.feasible = true;
    auto sol = simplex.minimize(std::vector<mpq_class>(f.columns.size()));
    std::vector<Rational> zero_w(static_cast<std::size_t>(model.spaces().n_treatments()));
    r.witness = to_latent(f, model, sol.x, zero_w, true);
    return r;
}

std::vector<SharpBounds> sharp_bounds_full(const ObservedDistribution& p, const ResponseModel& model,
                                           const std::vector<BoundsObjective>& objectives, const LpCaps& caps) {
    return solve(p, model, objectives, false, caps);
}

SharpBounds sharp_bounds_full(const ObservedDistribution& p, const ResponseModel& model,
                              const BoundsObjective& objective, const LpCaps& caps) {
    return std::move(solve(p, model, {objective}, false, caps).front());
}

std::vector<SharpBounds> sharp_bounds_reduced(const ObservedDistribution& p, const ResponseModel& model,
                                              const std::vector<BoundsObjective>& objectives, const LpCaps& caps) {
    return solve(p, model, objectives, true, caps);
}

SharpBounds sharp_bounds_reduced(const ObservedDistribution& p, const ResponseModel& model,
                                 const BoundsObjective& objective, const LpCaps& caps) {
    return std::move(solve(p, model, {objective}, true, caps).front());
}

std::vector<std::pair<double, double>> sharp_bounds_reduced_float(const ObservedDistribution& p,
                                                                  const ResponseModel& model,
                                                                  const std::vector<BoundsObjective>& objectives,
                                                                  const LpCaps& caps) {
    const auto& sp = model.spaces();
    Formulation f = build(p, model, true, caps);
    FloatSimplex simplex(f.lp);
    if (!simplex.feasible()) throw InfeasibleModel(model.label(), {});
    std::vector<std::pair<double, double>> out;
    for (const auto& o : objectives) {
        auto w = o.weights(sp.n_treatments());
        auto lo = simplex.minimize(convert<double>(costs(f, sp, w, true)));
        auto hi = simplex.maximize(convert<double>(costs(f, sp, w, false)));
        if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
            throw Error(ErrorCode::LpFailure, "float LP did not reach an optimum");
        out.emplace_back(lo.value, hi.value);
    }
    return out;
}

LatentDistribution witness_construction(const ObservedDistribution& p, const LatentDistribution& seed,
                                        const std::vector<Rational>& alpha) {
    const auto& sp = p.spaces();
    if (alpha.size() != static_cast<std::size_t>(sp.n_treatments()))
        throw Error(ErrorCode::DimensionMismatch, "alpha needs one entry per treatment");
    for (const auto& a : alpha)
        if (a < 0 || a > 1) throw Error(ErrorCode::AlphaOutOfRange, "alpha entry " + a.pretty() + " outside [0,1]");
    if (!(seed.spaces() == sp) || !(push_forward(seed) == p))
        throw Error(ErrorCode::SeedDoesNotRationalize, "seed distribution does not push forward to P");

    const int lo = 0, hi = sp.n_outcomes() - 1;
    std::map<LatentCell, Rational> out;
    for (const auto& [cell, m] : seed.masses()) {
        std::vector<std::pair<OutcomeResponseType, Rational>> parts{{cell.outcome, m}};
        for (int j : never_taker_partition(cell.treatment, sp.n_treatments()).never) {
            std::vector<std::pair<OutcomeResponseType, Rational>> next;
            for (auto& [ro, mass] : parts) {
                OutcomeResponseType low = ro, high = ro;
                low.assignments[j] = lo;
                high.assignments[j] = hi;
                next.emplace_back(std::move(low), mass * (Rational(1) - alpha[j]));
                next.emplace_back(std::move(high), mass * alpha[j]);
            }
            parts = std::move(next);
        }
        for (auto& [ro, mass] : parts) out[{ro, cell.treatment}] += mass;
    }
    return LatentDistribution(sp, std::move(out));
}

}  // namespace ivbounds
