#pragma once

#include "ivbounds/core.hpp"
#include "ivbounds/interval.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ivbounds {

struct AteBound {
    int j;
    int k;
    Interval interval;  // bounds on E[Y_j - Y_k]
};

struct BoundsReport {
    std::string method;
    std::vector<std::optional<Interval>> means;  // nullopt: empty identified set for that d
    std::vector<AteBound> ates;
    std::vector<int> zstar;                    // map used, empty when not applicable
    std::vector<std::vector<int>> zstar_sets;  // argmax sets from P

    bool feasible() const;
};

// Z*(d) = argmax_z P{D=d | Z=z}, ties kept.
std::vector<std::vector<int>> zstar_from_p(const ObservedDistribution& p);

// [beta + yL (1 - P{D=d|z}), beta + yU (1 - P{D=d|z})] evaluated at one z.
Interval gm_interval(const ObservedDistribution& p, int d, int z);

// Defaults to the smallest argmax per d.
BoundsReport gm_bounds(const ObservedDistribution& p, const std::optional<std::vector<int>>& zstar = std::nullopt);

Interval ate_bounds(const ObservedDistribution& p, int j, int k,
                    const std::optional<std::vector<int>>& zstar = std::nullopt);

// Intersection of gm_interval over all z.
BoundsReport mi_bounds(const ObservedDistribution& p);

// Binary Y, D, Z: bounds on Q{Y0=1} and Q{Y1=1} under exogeneity alone.
struct BinaryBounds {
    Interval y0;
    Interval y1;
};
BinaryBounds balke_pearl_bounds(const ObservedDistribution& p);

// Y = {0,1}, |D| = |Z| = 3, ordered choice: bounds on E[Y1].
Interval ordered_middle_bounds(const ObservedDistribution& p);

// Y = {0,1}, |D| = 3, |Z| = 2, strict targeting of treatments 1 and 2: bounds on E[Y0].
Interval arum3_y0_bounds(const ObservedDistribution& p);

// (Q{Y0=1}, Q{Y1=1}) when everyone is a complier or a defier.
std::pair<Rational, Rational> point_identify_compliers_defiers(const ObservedDistribution& p);

}  // namespace ivbounds
