#include "ivbounds/core.hpp"

#include "ivbounds/error.hpp"

#include <algorithm>

namespace ivbounds {

namespace {

void check_index(int value, int bound, const char* what) {
    if (value < 0 || value >= bound)
        throw Error(ErrorCode::IndexOutOfRange,
                    std::string(what) + " index " + std::to_string(value) + " outside [0," + std::to_string(bound) + ")");
}

}  // namespace

ProblemSpaces::ProblemSpaces(std::vector<Rational> y_values, int n_treatments, int n_instruments)
    : y_(std::move(y_values)), n_d_(n_treatments), n_z_(n_instruments) {
    if (y_.size() < 2) throw Error(ErrorCode::InvalidSpaces, "need at least two outcome values");
    if (n_d_ < 2 || n_z_ < 2) throw Error(ErrorCode::InvalidSpaces, "need at least two treatments and two instruments");
    for (std::size_t i = 1; i < y_.size(); ++i)
        if (!(y_[i - 1] < y_[i])) throw Error(ErrorCode::InvalidSpaces, "y_values must be strictly increasing");
}

const Rational& ProblemSpaces::y(int index) const {
    check_index(index, n_outcomes(), "outcome");
    return y_[static_cast<std::size_t>(index)];
}

std::optional<int> ProblemSpaces::index_of(const Rational& value) const {
    auto it = std::lower_bound(y_.begin(), y_.end(), value);
    if (it == y_.end() || *it != value) return std::nullopt;
    return static_cast<int>(it - y_.begin());
}

bool ProblemSpaces::is_binary() const {
    return n_d_ == 2 && n_z_ == 2 && y_.size() == 2 && y_[0] == 0 && y_[1] == 1;
}

const Rational& ObservedDistribution::operator()(int z, int d, int y) const {
    check_index(z, spaces_.n_instruments(), "instrument");
    check_index(d, spaces_.n_treatments(), "treatment");
    check_index(y, spaces_.n_outcomes(), "outcome");
    auto idx = (static_cast<std::size_t>(z) * spaces_.n_treatments() + d) * spaces_.n_outcomes() + y;
    return p_[idx];
}

PTable ObservedDistribution::table() const {
    PTable t(spaces_.n_instruments());
    for (int z = 0; z < spaces_.n_instruments(); ++z) {
        t[z].resize(spaces_.n_treatments());
        for (int d = 0; d < spaces_.n_treatments(); ++d)
            for (int y = 0; y < spaces_.n_outcomes(); ++y) t[z][d].push_back((*this)(z, d, y));
    }
    return t;
}

ObservedDistribution validate_observed(const PTable& table, const ProblemSpaces& spaces) {
    auto mismatch = [](const std::string& what, std::size_t got, int want) {
        return Error(ErrorCode::DimensionMismatch,
                     what + " has " + std::to_string(got) + " entries, expected " + std::to_string(want));
    };
    if (table.size() != static_cast<std::size_t>(spaces.n_instruments())) throw mismatch("p", table.size(), spaces.n_instruments());
    std::vector<Rational> flat;
    flat.reserve(static_cast<std::size_t>(spaces.n_instruments() * spaces.n_treatments() * spaces.n_outcomes()));
    for (int z = 0; z < spaces.n_instruments(); ++z) {
        const auto& row = table[z];
        if (row.size() != static_cast<std::size_t>(spaces.n_treatments()))
            throw mismatch("p[" + std::to_string(z) + "]", row.size(), spaces.n_treatments());
        Rational total;
        for (int d = 0; d < spaces.n_treatments(); ++d) {
            if (row[d].size() != static_cast<std::size_t>(spaces.n_outcomes()))
                throw mismatch("p[" + std::to_string(z) + "][" + std::to_string(d) + "]", row[d].size(), spaces.n_outcomes());
            for (int y = 0; y < spaces.n_outcomes(); ++y) {
                const Rational& m = row[d][y];
                if (m.sign() < 0)
                    throw Error(ErrorCode::NegativeMass, "p[" + std::to_string(z) + "][" + std::to_string(d) + "][" +
                                                             std::to_string(y) + "] = " + m.pretty());
                total += m;
                flat.push_back(m);
            }
        }
        if (total != 1)
            throw Error(ErrorCode::MassNotOne,
                        "z=" + std::to_string(z) + " sums to " + total.pretty() + " (deficit " + (Rational(1) - total).pretty() + ")");
    }
    return ObservedDistribution(spaces, std::move(flat));
}

std::string TreatmentResponseType::to_string() const {
    std::string s;
    for (int d : assignments) s += std::to_string(d);
    return s;
}

std::string OutcomeResponseType::to_string() const {
    std::string s;
    for (int y : assignments) s += std::to_string(y);
    return s;
}

void validate_treatment_type(const TreatmentResponseType& rt, const ProblemSpaces& spaces) {
    if (rt.size() != spaces.n_instruments())
        throw Error(ErrorCode::DimensionMismatch, "treatment type " + rt.to_string() + " needs length " +
                                                      std::to_string(spaces.n_instruments()));
    for (int d : rt.assignments) check_index(d, spaces.n_treatments(), "treatment");
}

void validate_outcome_type(const OutcomeResponseType& ro, const ProblemSpaces& spaces) {
    if (ro.size() != spaces.n_treatments())
        throw Error(ErrorCode::DimensionMismatch, "outcome type " + ro.to_string() + " needs length " +
                                                      std::to_string(spaces.n_treatments()));
    for (int y : ro.assignments) check_index(y, spaces.n_outcomes(), "outcome");
}

LatentDistribution::LatentDistribution(ProblemSpaces spaces, std::map<LatentCell, Rational> masses)
    : spaces_(std::move(spaces)) {
    Rational total;
    for (auto& [cell, m] : masses) {
        validate_outcome_type(cell.outcome, spaces_);
        validate_treatment_type(cell.treatment, spaces_);
        if (m.sign() < 0)
            throw Error(ErrorCode::NegativeMass, "q(" + cell.outcome.to_string() + "," + cell.treatment.to_string() + ")");
        total += m;
        if (!m.is_zero()) q_.emplace(cell, m);
    }
    if (total != 1) throw Error(ErrorCode::MassNotOne, "latent masses sum to " + total.pretty());
}

Rational LatentDistribution::mass(const LatentCell& cell) const {
    auto it = q_.find(cell);
    return it == q_.end() ? Rational() : it->second;
}

std::map<TreatmentResponseType, Rational> LatentDistribution::treatment_marginal() const {
    std::map<TreatmentResponseType, Rational> out;
    for (const auto& [cell, m] : q_) out[cell.treatment] += m;
    return out;
}

Rational LatentDistribution::mean(int d) const {
    check_index(d, spaces_.n_treatments(), "treatment");
    Rational s;
    for (const auto& [cell, m] : q_) s += spaces_.y(cell.outcome[d]) * m;
    return s;
}

ObservedDistribution push_forward(const LatentDistribution& q) {
    const auto& sp = q.spaces();
    PTable t(sp.n_instruments(), std::vector<std::vector<Rational>>(
                                     sp.n_treatments(), std::vector<Rational>(sp.n_outcomes())));
    for (const auto& [cell, m] : q.masses())
        for (int z = 0; z < sp.n_instruments(); ++z) {
            int d = cell.treatment[z];
            t[z][d][cell.outcome[d]] += m;
        }
    return validate_observed(t, sp);
}

Rational beta(const ObservedDistribution& p, int d, int z) {
    Rational s;
    for (int y = 0; y < p.spaces().n_outcomes(); ++y) s += p.spaces().y(y) * p(z, d, y);
    return s;
}

Rational treatment_prob(const ObservedDistribution& p, int d, int z) {
    Rational s;
    for (int y = 0; y < p.spaces().n_outcomes(); ++y) s += p(z, d, y);
    return s;
}

}  // namespace ivbounds
