#pragma once

#include "ivbounds/core.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ivbounds {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// All of D^|Z| in lexicographic order.
std::vector<TreatmentResponseType> enumerate_treatment_types(const ProblemSpaces& spaces,
                                                             std::size_t cap = kDefaultEnumerationCap);

struct NeverTakerPartition {
    std::vector<int> never;    // N(r^t): treatments taken under no instrument value
    std::vector<int> complied;  // complement, increasing
};

NeverTakerPartition never_taker_partition(const TreatmentResponseType& rt, int n_treatments);

// A model given by its set of admissible treatment response types. Outcomes are unrestricted.
class ResponseModel {
public:
    ResponseModel(ProblemSpaces spaces, std::vector<TreatmentResponseType> support, std::string label);

    // Filters the full enumeration.
    static ResponseModel filter(const ProblemSpaces& spaces, std::string label,
                                const std::function<bool(const TreatmentResponseType&)>& keep,
                                std::size_t cap = kDefaultEnumerationCap);

    const ProblemSpaces& spaces() const { return spaces_; }
    const std::vector<TreatmentResponseType>& support() const { return support_; }
    const std::string& label() const { return label_; }
    bool contains(const TreatmentResponseType& rt) const;
    std::size_t size() const { return support_.size(); }

    // Same spaces and support; labels are ignored.
    bool same_support(const ResponseModel& other) const;

private:
    ProblemSpaces spaces_;
    std::vector<TreatmentResponseType> support_;  // sorted, unique
    std::string label_;
};

struct EncouragementMap {
    std::vector<int> zstar;                    // chosen z*(d): smallest element of the set
    std::vector<std::vector<int>> zstar_sets;  // Z*(d)
};

struct GmCheck {
    std::vector<std::vector<int>> zstar_sets;  // empty set for every failing d

    bool holds() const;
    std::vector<int> failing() const;
    EncouragementMap encouragement() const;  // throws InvalidArgument unless holds()
};

// z is valid for d iff no support type avoids d at z but takes d elsewhere.
GmCheck gm_witness(const ResponseModel& model);

struct MonotonicityViolation {
    int d;
    int z;
    int z_other;
    friend bool operator==(const MonotonicityViolation&, const MonotonicityViolation&) = default;
};

struct UnorderedMonotoneCheck {
    std::vector<MonotonicityViolation> violations;  // every (d, z < z') pair whose indicators cross
    bool holds() const { return violations.empty(); }
};

UnorderedMonotoneCheck is_unordered_monotone(const ResponseModel& model);
bool is_ordered_monotone(const ResponseModel& model);

struct BuiltinParams {
    std::vector<int> zstar;  // gm_max only
};

// exogeneity_only, one_sided_rct, generalized_no_defier, cheng_small, compliers_or_defiers,
// ordered, kline_walters, klm, gm_max.
ResponseModel builtin(std::string_view name, const ProblemSpaces& spaces, const BuiltinParams& params = {});
const std::vector<std::string>& builtin_names();

}  // namespace ivbounds
