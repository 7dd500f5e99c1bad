#include "ivbounds/response_types.hpp"

#include "ivbounds/error.hpp"

#include <algorithm>

namespace ivbounds {

std::vector<TreatmentResponseType> enumerate_treatment_types(const ProblemSpaces& spaces, std::size_t cap) {
    const int nd = spaces.n_treatments(), nz = spaces.n_instruments();
    std::size_t count = 1;
    for (int i = 0; i < nz; ++i) {
        count *= static_cast<std::size_t>(nd);
        if (count > cap)
            throw Error(ErrorCode::EnumerationTooLarge, std::to_string(nd) + "^" + std::to_string(nz) +
                                                            " treatment types exceed cap " + std::to_string(cap));
    }
    std::vector<TreatmentResponseType> out;
    out.reserve(count);
    std::vector<int> cur(static_cast<std::size_t>(nz), 0);
    for (std::size_t n = 0; n < count; ++n) {
        out.push_back({cur});
        for (int pos = nz - 1; pos >= 0; --pos) {
            if (++cur[pos] < nd) break;
            cur[pos] = 0;
        }
    }
    return out;
}

NeverTakerPartition never_taker_partition(const TreatmentResponseType& rt, int n_treatments) {
    std::vector<bool> taken(static_cast<std::size_t>(n_treatments), false);
    for (int d : rt.assignments) taken.at(static_cast<std::size_t>(d)) = true;
    NeverTakerPartition part;
    for (int d = 0; d < n_treatments; ++d) (taken[d] ? part.complied : part.never).push_back(d);
    return part;
}

ResponseModel::ResponseModel(ProblemSpaces spaces, std::vector<TreatmentResponseType> support, std::string label)
    : spaces_(std::move(spaces)), support_(std::move(support)), label_(std::move(label)) {
    if (support_.empty()) throw Error(ErrorCode::InvalidArgument, "model '" + label_ + "' has empty support");
    for (const auto& rt : support_) validate_treatment_type(rt, spaces_);
    std::sort(support_.begin(), support_.end());
    support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
}

ResponseModel ResponseModel::filter(const ProblemSpaces& spaces, std::string label,
                                    const std::function<bool(const TreatmentResponseType&)>& keep, std::size_t cap) {
    std::vector<TreatmentResponseType> kept;
    for (auto& rt : enumerate_treatment_types(spaces, cap))
        if (keep(rt)) kept.push_back(std::move(rt));
    return ResponseModel(spaces, std::move(kept), std::move(label));
}

bool ResponseModel::contains(const TreatmentResponseType& rt) const {
    return std::binary_search(support_.begin(), support_.end(), rt);
}

bool ResponseModel::same_support(const ResponseModel& other) const {
    return spaces_ == other.spaces_ && support_ == other.support_;
}

bool GmCheck::holds() const {
    return std::none_of(zstar_sets.begin(), zstar_sets.end(), [](const auto& s) { return s.empty(); });
}

std::vector<int> GmCheck::failing() const {
    std::vector<int> out;
    for (std::size_t d = 0; d < zstar_sets.size(); ++d)
        if (zstar_sets[d].empty()) out.push_back(static_cast<int>(d));
    return out;
}

EncouragementMap GmCheck::encouragement() const {
    if (!holds()) throw Error(ErrorCode::InvalidArgument, "generalized monotonicity fails");
    EncouragementMap m{{}, zstar_sets};
    for (const auto& s : zstar_sets) m.zstar.push_back(s.front());
    return m;
}

GmCheck gm_witness(const ResponseModel& model) {
    const int nd = model.spaces().n_treatments(), nz = model.spaces().n_instruments();
    GmCheck out{std::vector<std::vector<int>>(static_cast<std::size_t>(nd))};
    for (int d = 0; d < nd; ++d)
        for (int z = 0; z < nz; ++z) {
            bool valid = std::none_of(model.support().begin(), model.support().end(), [&](const auto& rt) {
                return rt[z] != d && std::find(rt.assignments.begin(), rt.assignments.end(), d) != rt.assignments.end();
            });
            if (valid) out.zstar_sets[d].push_back(z);
        }
    return out;
}

UnorderedMonotoneCheck is_unordered_monotone(const ResponseModel& model) {
    const int nd = model.spaces().n_treatments(), nz = model.spaces().n_instruments();
    UnorderedMonotoneCheck out;
    for (int d = 0; d < nd; ++d)
        for (int z = 0; z < nz; ++z)
            for (int z2 = z + 1; z2 < nz; ++z2) {
                bool ge = true, le = true;
                for (const auto& rt : model.support()) {
                    int a = rt[z] == d, b = rt[z2] == d;
                    ge = ge && a >= b;
                    le = le && a <= b;
                }
                if (!ge && !le) out.violations.push_back({d, z, z2});
            }
    return out;
}

bool is_ordered_monotone(const ResponseModel& model) {
    return std::all_of(model.support().begin(), model.support().end(), [](const auto& rt) {
        return std::is_sorted(rt.assignments.begin(), rt.assignments.end());
    });
}

namespace {

bool takes(const TreatmentResponseType& rt, int d) {
    return std::find(rt.assignments.begin(), rt.assignments.end(), d) != rt.assignments.end();
}

void require(bool ok, std::string_view name, const std::string& what) {
    if (!ok) throw Error(ErrorCode::IncompatibleSpaces, std::string(name) + " requires " + what);
}

std::function<bool(const TreatmentResponseType&)> gm_max_predicate(std::vector<int> zstar) {
    return [zstar = std::move(zstar)](const TreatmentResponseType& rt) {
        for (std::size_t d = 0; d < zstar.size(); ++d)
            if (rt[zstar[d]] != static_cast<int>(d) && takes(rt, static_cast<int>(d))) return false;
        return true;
    };
}

bool one_sided(const TreatmentResponseType& rt) {
    for (int z = 0; z < rt.size(); ++z)
        if (rt[z] != 0 && rt[z] != z) return false;
    return true;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"exogeneity_only", "one_sided_rct", "generalized_no_defier",
                                                "cheng_small",     "compliers_or_defiers", "ordered",
                                                "kline_walters",   "klm",           "gm_max"};
    return names;
}

ResponseModel builtin(std::string_view name, const ProblemSpaces& spaces, const BuiltinParams& params) {
    const int nd = spaces.n_treatments(), nz = spaces.n_instruments();
    const std::string label(name);
    const bool square3 = nd == 3 && nz == 3;

    if (name == "exogeneity_only") return ResponseModel::filter(spaces, label, [](const auto&) { return true; });
    if (name == "one_sided_rct") {
        require(nd == nz, name, "|D| = |Z|");
        return ResponseModel::filter(spaces, label, one_sided);
    }
    if (name == "generalized_no_defier") {
        require(nd == nz, name, "|D| = |Z|");
        std::vector<int> identity(static_cast<std::size_t>(nd));
        for (int d = 0; d < nd; ++d) identity[d] = d;
        return ResponseModel::filter(spaces, label, gm_max_predicate(identity));
    }
    if (name == "cheng_small") {
        require(square3, name, "|D| = |Z| = 3");
        return ResponseModel::filter(spaces, label,
                                     [](const auto& rt) { return one_sided(rt) && (rt[2] != 2 || rt[1] == 1); });
    }
    if (name == "compliers_or_defiers") {
        require(nd == 2 && nz == 2, name, "|D| = |Z| = 2");
        return ResponseModel::filter(spaces, label, [](const auto& rt) { return rt[0] != rt[1]; });
    }
    if (name == "ordered")
        return ResponseModel::filter(spaces, label, [](const auto& rt) {
            return std::is_sorted(rt.assignments.begin(), rt.assignments.end());
        });
    if (name == "kline_walters") {
        require(nd == 3 && nz == 2, name, "|D| = 3, |Z| = 2");
        return ResponseModel::filter(spaces, label, [](const auto& rt) { return rt[0] == rt[1] || rt[1] == 2; });
    }
    if (name == "klm") {
        require(square3, name, "|D| = |Z| = 3");
        return ResponseModel::filter(spaces, label, [](const auto& rt) {
            if (rt[0] == 1 && rt[1] != 1) return false;
            if (rt[0] == 2 && rt[2] != 2) return false;
            if (rt[0] != 1 && rt[1] != 1 && (rt[1] == 2) != (rt[0] == 2)) return false;
            if (rt[0] != 2 && rt[2] != 2 && (rt[2] == 1) != (rt[0] == 1)) return false;
            return true;
        });
    }
    if (name == "gm_max") {
        if (params.zstar.size() != static_cast<std::size_t>(nd))
            throw Error(ErrorCode::InvalidArgument, "gm_max needs a zstar entry per treatment");
        for (int z : params.zstar)
            if (z < 0 || z >= nz) throw Error(ErrorCode::IndexOutOfRange, "gm_max zstar entry " + std::to_string(z));
        return ResponseModel::filter(spaces, label, gm_max_predicate(params.zstar));
    }
    throw Error(ErrorCode::UnknownModel, "no builtin model named '" + label + "'");
}

}  // namespace ivbounds
