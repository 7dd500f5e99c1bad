#pragma once

#include "ivbounds/core.hpp"
#include "ivbounds/error.hpp"
#include "ivbounds/interval.hpp"
#include "ivbounds/response_types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ivbounds {

class BoundsObjective {
public:
    enum class Kind { Mean, Ate, Linear };

    static BoundsObjective mean(int d);
    static BoundsObjective ate(int j, int k);  // E[Y_j - Y_k]
    static BoundsObjective linear(std::vector<Rational> weights);

    Kind kind() const { return kind_; }
    int d() const { return a_; }
    int j() const { return a_; }
    int k() const { return b_; }
    // Weight on E[Y_d] per treatment; validates indices against n_treatments.
    std::vector<Rational> weights(int n_treatments) const;
    std::string label() const;

private:
    BoundsObjective(Kind kind, int a, int b, std::vector<Rational> w) : kind_(kind), a_(a), b_(b), w_(std::move(w)) {}
    Kind kind_;
    int a_;
    int b_;
    std::vector<Rational> w_;
};

struct LpCaps {
    std::size_t full = 50'000;
    std::size_t reduced = 200'000;
    // IVBOUNDS_MAX_VARS, when set, replaces both caps.
    static LpCaps from_env();
};

// One labelled entry of an infeasibility certificate y (y'A <= 0, y'b > 0).
struct CertificateEntry {
    std::string row;  // "p[z=..,d=..,y=..]" or "total"
    Rational weight;
};

class InfeasibleModel : public Error {
public:
    InfeasibleModel(const std::string& model, std::vector<CertificateEntry> certificate)
        : Error(ErrorCode::Infeasible, "model '" + model + "' cannot rationalize P"), certificate_(std::move(certificate)) {}
    const std::vector<CertificateEntry>& certificate() const { return certificate_; }

private:
    std::vector<CertificateEntry> certificate_;
};

struct ConsistencyResult {
    bool feasible = false;
    std::optional<LatentDistribution> witness;  // set when feasible
    std::vector<CertificateEntry> certificate;  // nonzero entries, set when infeasible
};

ConsistencyResult consistency_check(const ObservedDistribution& p, const ResponseModel& model,
                                    const LpCaps& caps = LpCaps::from_env());

struct SharpBounds {
    Interval interval;
    LatentDistribution lower_witness;
    LatentDistribution upper_witness;
};

std::size_t full_variable_count(const ResponseModel& model);
std::size_t reduced_variable_count(const ResponseModel& model);

// Variables q(r^o, r^t) over support x Y^|D|. All objectives share one phase 1.
std::vector<SharpBounds> sharp_bounds_full(const ObservedDistribution& p, const ResponseModel& model,
                                           const std::vector<BoundsObjective>& objectives,
                                           const LpCaps& caps = LpCaps::from_env());
SharpBounds sharp_bounds_full(const ObservedDistribution& p, const ResponseModel& model,
                              const BoundsObjective& objective, const LpCaps& caps = LpCaps::from_env());

// Variables are masses over complied outcomes only; never-taken outcomes sit at an extreme of Y.
// Witnesses are expanded back to full outcome types.
std::vector<SharpBounds> sharp_bounds_reduced(const ObservedDistribution& p, const ResponseModel& model,
                                              const std::vector<BoundsObjective>& objectives,
                                              const LpCaps& caps = LpCaps::from_env());
SharpBounds sharp_bounds_reduced(const ObservedDistribution& p, const ResponseModel& model,
                                 const BoundsObjective& objective, const LpCaps& caps = LpCaps::from_env());

// Reduced formulation in double precision; only for the simulation harness.
std::vector<std::pair<double, double>> sharp_bounds_reduced_float(const ObservedDistribution& p,
                                                                  const ResponseModel& model,
                                                                  const std::vector<BoundsObjective>& objectives,
                                                                  const LpCaps& caps = LpCaps::from_env());

// Moves the mass of each never-taken treatment's outcome onto yL / yU with weights 1-alpha_d / alpha_d.
LatentDistribution witness_construction(const ObservedDistribution& p, const LatentDistribution& seed,
                                        const std::vector<Rational>& alpha);

}  // namespace ivbounds
