#pragma once

#include "ivbounds/error.hpp"
#include "ivbounds/rational.hpp"

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace ivbounds {

// min c'x  s.t.  A x = b, x >= 0, with A stored as sparse rows.
struct LpProblem {
    int n_vars = 0;
    std::vector<std::vector<std::pair<int, Rational>>> rows;
    std::vector<Rational> rhs;

    int add_row(std::vector<std::pair<int, Rational>> entries, Rational b) {
        rows.push_back(std::move(entries));
        rhs.push_back(std::move(b));
        return static_cast<int>(rows.size()) - 1;
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<mpq_class> {
    static constexpr bool exact = true;
    static int sign(const mpq_class& x) { return sgn(x); }
    static mpq_class from(const Rational& r) { return r.mpq(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr double eps = 1e-9;
    static int sign(double x) { return x > eps ? 1 : (x < -eps ? -1 : 0); }
    static double from(const Rational& r) { return r.to_double(); }
};

// Dense two-phase tableau simplex. Phase 1 runs once in the constructor.
// Pricing is most-negative reduced cost until kDegenerateLimit degenerate pivots
// in a row, then Bland's rule for the rest of that run, so every run terminates.
template <class T>
class BasicSimplex {
public:
    using Traits = ScalarTraits<T>;
    static constexpr int kDegenerateLimit = 50;

    struct Solution {
        LpStatus status = LpStatus::Infeasible;
        T value{};
        std::vector<T> x;
    };

    explicit BasicSimplex(const LpProblem& lp);

    bool feasible() const { return feasible_; }
    // When infeasible: y with y'A <= 0 and y'b > 0 over the original rows.
    const std::vector<T>& farkas() const { return farkas_; }
    std::size_t redundant_rows() const { return redundant_; }

    Solution minimize(const std::vector<T>& cost) const;
    Solution maximize(const std::vector<T>& cost) const;
    // Each solve starts from the previous optimal basis.
    std::vector<Solution> minimize_many(const std::vector<std::vector<T>>& costs) const;

private:
    using Row = std::vector<T>;

    static void pivot(std::vector<Row>& t, Row& obj, std::vector<int>& basis, std::size_t r, int s);
    // Returns false when unbounded. Columns >= limit never enter.
    static bool run(std::vector<Row>& t, Row& obj, std::vector<int>& basis, int limit);
    Solution solve_from(std::vector<Row>& t, std::vector<int>& basis, const std::vector<T>& cost) const;
    void verify(const std::vector<T>& x) const;

    int n_ = 0;
    std::vector<std::vector<std::pair<int, T>>> rows_;
    std::vector<T> rhs_;
    bool feasible_ = false;
    std::vector<T> farkas_;
    std::size_t redundant_ = 0;
    std::vector<Row> base_;  // feasible tableau without artificials; last entry of each row is the rhs
    std::vector<int> basis_;
};

using ExactSimplex = BasicSimplex<mpq_class>;
using FloatSimplex = BasicSimplex<double>;

template <class T>
BasicSimplex<T>::BasicSimplex(const LpProblem& lp) : n_(lp.n_vars) {
    if (lp.rows.size() != lp.rhs.size()) throw Error(ErrorCode::LpFailure, "row/rhs count mismatch");
    const std::size_t m = lp.rows.size();
    rows_.resize(m);
    rhs_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& [j, a] : lp.rows[i]) {
            if (j < 0 || j >= n_) throw Error(ErrorCode::LpFailure, "column index out of range");
            rows_[i].emplace_back(j, Traits::from(a));
        }
        rhs_.push_back(Traits::from(lp.rhs[i]));
    }

    // Phase 1: artificial n+i for row i, rows flipped so the rhs is nonnegative.
    const int width = n_ + static_cast<int>(m);
    std::vector<Row> t(m, Row(static_cast<std::size_t>(width) + 1));
    std::vector<int> sign_flip(m, 1);
    std::vector<int> basis(m);
    Row obj(static_cast<std::size_t>(width) + 1);
    for (std::size_t i = 0; i < m; ++i) {
        if (Traits::sign(rhs_[i]) < 0) sign_flip[i] = -1;
        for (const auto& [j, a] : rows_[i]) t[i][j] += sign_flip[i] < 0 ? T(-a) : a;
        t[i][width] = sign_flip[i] < 0 ? T(-rhs_[i]) : rhs_[i];
        t[i][n_ + static_cast<int>(i)] = 1;
        basis[i] = n_ + static_cast<int>(i);
        for (int j = 0; j < n_; ++j) obj[j] -= t[i][j];
        obj[width] -= t[i][width];
    }
    run(t, obj, basis, n_);

    if (Traits::sign(obj[width]) < 0) {
        farkas_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            T y = T(1) - obj[n_ + static_cast<int>(i)];
            farkas_[i] = sign_flip[i] < 0 ? T(-y) : y;
        }
        if constexpr (Traits::exact) {
            std::vector<T> ya(static_cast<std::size_t>(n_));
            T yb = 0;
            for (std::size_t i = 0; i < m; ++i) {
                for (const auto& [j, a] : rows_[i]) ya[j] += farkas_[i] * a;
                yb += farkas_[i] * rhs_[i];
            }
            for (const auto& v : ya)
                if (Traits::sign(v) > 0) throw Error(ErrorCode::LpFailure, "Farkas certificate check failed");
            if (Traits::sign(yb) <= 0) throw Error(ErrorCode::LpFailure, "Farkas certificate check failed");
        }
        return;
    }
    feasible_ = true;

    // Pivot remaining artificials out; rows where that is impossible are redundant.
    std::vector<bool> keep(m, true);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n_) continue;
        int s = -1;
        for (int j = 0; j < n_ && s < 0; ++j)
            if (Traits::sign(t[i][j]) != 0) s = j;
        if (s >= 0)
            pivot(t, obj, basis, i, s);
        else
            keep[i] = false;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!keep[i]) {
            ++redundant_;
            continue;
        }
        Row r(t[i].begin(), t[i].begin() + n_);
        r.push_back(t[i][width]);
        base_.push_back(std::move(r));
        basis_.push_back(basis[i]);
    }
}

template <class T>
void BasicSimplex<T>::pivot(std::vector<Row>& t, Row& obj, std::vector<int>& basis, std::size_t r, int s) {
    Row& pr = t[r];
    const T inv = T(1) / pr[s];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < pr.size(); ++j)
        if (pr[j] != 0) {
            pr[j] *= inv;
            nz.push_back(j);
        }
    pr[s] = 1;
    auto eliminate = [&](Row& row) {
        if (row[s] == 0) return;
        const T f = row[s];
        for (std::size_t j : nz) row[j] -= f * pr[j];
        row[s] = 0;
    };
    for (std::size_t i = 0; i < t.size(); ++i)
        if (i != r) eliminate(t[i]);
    eliminate(obj);
    basis[r] = s;
}

template <class T>
bool BasicSimplex<T>::run(std::vector<Row>& t, Row& obj, std::vector<int>& basis, int limit) {
    const std::size_t rhs = obj.size() - 1;
    bool bland = false;
    int degenerate = 0;
    for (;;) {
        int s = -1;
        for (int j = 0; j < limit; ++j)
            if (Traits::sign(obj[j]) < 0 && (s < 0 || obj[j] < obj[s])) {
                s = j;
                if (bland) break;
            }
        if (s < 0) return true;
        std::size_t r = t.size();
        T best{};
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (Traits::sign(t[i][s]) <= 0) continue;
            T ratio = t[i][rhs] / t[i][s];
            if (r == t.size() || ratio < best || (ratio == best && basis[i] < basis[r])) {
                r = i;
                best = ratio;
            }
        }
        if (r == t.size()) return false;
        if (Traits::sign(best) != 0)
            degenerate = 0;
        else if (++degenerate >= kDegenerateLimit)
            bland = true;
        pivot(t, obj, basis, r, s);
    }
}

template <class T>
typename BasicSimplex<T>::Solution BasicSimplex<T>::minimize(const std::vector<T>& cost) const {
    return minimize_many({cost}).front();
}

template <class T>
std::vector<typename BasicSimplex<T>::Solution> BasicSimplex<T>::minimize_many(
    const std::vector<std::vector<T>>& costs) const {
    std::vector<Solution> out;
    std::vector<Row> t = base_;
    std::vector<int> basis = basis_;
    for (const auto& cost : costs) out.push_back(solve_from(t, basis, cost));
    return out;
}

template <class T>
typename BasicSimplex<T>::Solution BasicSimplex<T>::solve_from(std::vector<Row>& t, std::vector<int>& basis,
                                                               const std::vector<T>& cost) const {
    if (cost.size() != static_cast<std::size_t>(n_)) throw Error(ErrorCode::LpFailure, "cost vector has wrong length");
    Solution sol;
    if (!feasible_) return sol;
    Row obj(cost.begin(), cost.end());
    obj.emplace_back();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const T& cb = cost[basis[i]];
        if (Traits::sign(cb) == 0) continue;
        for (std::size_t j = 0; j < obj.size(); ++j)
            if (t[i][j] != 0) obj[j] -= cb * t[i][j];
    }
    if (!run(t, obj, basis, n_)) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.x.assign(static_cast<std::size_t>(n_), T{});
    for (std::size_t i = 0; i < t.size(); ++i) sol.x[basis[i]] = t[i].back();
    for (int j = 0; j < n_; ++j)
        if (sol.x[j] != 0) sol.value += cost[j] * sol.x[j];
    if constexpr (Traits::exact) {
        verify(sol.x);
        if (sol.value != -obj.back()) throw Error(ErrorCode::LpFailure, "objective mismatch at optimum");
    }
    return sol;
}

template <class T>
typename BasicSimplex<T>::Solution BasicSimplex<T>::maximize(const std::vector<T>& cost) const {
    std::vector<T> neg(cost.size());
    for (std::size_t j = 0; j < cost.size(); ++j) neg[j] = -cost[j];
    Solution sol = minimize(neg);
    sol.value = -sol.value;
    return sol;
}

template <class T>
void BasicSimplex<T>::verify(const std::vector<T>& x) const {
    for (const auto& v : x)
        if (Traits::sign(v) < 0) throw Error(ErrorCode::LpFailure, "negative primal value");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        T lhs = 0;
        for (const auto& [j, a] : rows_[i]) lhs += a * x[j];
        if (lhs != rhs_[i]) throw Error(ErrorCode::LpFailure, "primal solution violates row " + std::to_string(i));
    }
}

}  // namespace ivbounds
