#pragma once

#include "ivbounds/core.hpp"
#include "ivbounds/response_types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ivbounds {

// D_z = argmax_d g(z,d) + U_d with U absolutely continuous.
struct ArumSpec {
    ArumSpec(ProblemSpaces spaces, std::vector<std::vector<Rational>> g, bool full_support_noise = true);

    ProblemSpaces spaces;
    std::vector<std::vector<Rational>> g;  // [z][d]
    bool full_support_noise;
};

// g(z,d) = upper[d] at z = target(d), lower[d] elsewhere; untargeted d get lower[d] everywhere.
ArumSpec strict_targeting_spec(const ProblemSpaces& spaces, const std::map<int, int>& targets,
                               const std::vector<Rational>& upper, const std::vector<Rational>& lower);

struct UniformTargeting {
    std::vector<std::optional<int>> zstar;  // smallest valid z*(d)
    bool holds() const;
    std::vector<int> failing() const;
};

UniformTargeting uniform_targeting_check(const ArumSpec& a);

enum class TargetingKind { Uniform, StrictOneToOne, Neither };

struct TargetingReport {
    TargetingKind kind = TargetingKind::Neither;
    std::vector<int> zstar;       // uniform: z*(d)
    std::map<int, int> targets;   // strict: d -> z(d) for targeted d
    std::vector<int> untargeted;  // strict: the remaining treatments
    std::string reason;           // why the ArumSpec is neither
};

std::string to_string(TargetingKind kind);

TargetingReport strict_one_to_one_check(const ArumSpec& a);
// Uniform if uniform_targeting_check holds, else the strict check.
TargetingReport classify_targeting(const ArumSpec& a);

struct ArumSupportOptions {
    bool reject_all_targeted = false;  // refuse strict-targeting-shaped specs with no untargeted treatment
};

// Types whose utility region has positive measure: max common slack s of the
// region's inequalities (u_0 = 0) is positive.
ResponseModel arum_support(const ArumSpec& a, const ArumSupportOptions& options = {});
bool arum_region_has_interior(const ArumSpec& a, const TreatmentResponseType& rt);

struct BinaryArumSets {
    std::vector<int> upper;  // argmax_z g(z,1) - g(z,0)
    std::vector<int> lower;  // argmin
};

BinaryArumSets binary_arum_zstar(const ArumSpec& a);

}  // namespace ivbounds
