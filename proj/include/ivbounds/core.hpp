#pragma once

#include "ivbounds/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ivbounds {

// Outcome support Y (strictly increasing), treatments 0..nD-1, instruments 0..nZ-1.
class ProblemSpaces {
public:
    ProblemSpaces(std::vector<Rational> y_values, int n_treatments, int n_instruments);

    const std::vector<Rational>& y_values() const { return y_; }
    const Rational& y(int index) const;
    const Rational& y_lower() const { return y_.front(); }
    const Rational& y_upper() const { return y_.back(); }
    std::optional<int> index_of(const Rational& value) const;

    int n_outcomes() const { return static_cast<int>(y_.size()); }
    int n_treatments() const { return n_d_; }
    int n_instruments() const { return n_z_; }

    bool is_binary() const;  // Y = {0,1}, |D| = |Z| = 2

    friend bool operator==(const ProblemSpaces&, const ProblemSpaces&) = default;

private:
    std::vector<Rational> y_;
    int n_d_;
    int n_z_;
};

using PTable = std::vector<std::vector<std::vector<Rational>>>;  // [z][d][y]

// Conditional pmf p_{yd|z}. Only constructible through validate_observed.
class ObservedDistribution {
public:
    const ProblemSpaces& spaces() const { return spaces_; }
    // p_{yd|z}, with y given as an index into y_values.
    const Rational& operator()(int z, int d, int y) const;
    PTable table() const;

    friend bool operator==(const ObservedDistribution&, const ObservedDistribution&) = default;

private:
    friend ObservedDistribution validate_observed(const PTable&, const ProblemSpaces&);
    ObservedDistribution(ProblemSpaces spaces, std::vector<Rational> flat)
        : spaces_(std::move(spaces)), p_(std::move(flat)) {}

    ProblemSpaces spaces_;
    std::vector<Rational> p_;
};

ObservedDistribution validate_observed(const PTable& table, const ProblemSpaces& spaces);

// Entry z is the treatment taken when Z = z.
struct TreatmentResponseType {
    std::vector<int> assignments;

    int operator[](int z) const { return assignments[static_cast<std::size_t>(z)]; }
    int size() const { return static_cast<int>(assignments.size()); }
    std::string to_string() const;  // "012"
    friend auto operator<=>(const TreatmentResponseType&, const TreatmentResponseType&) = default;
};

// Entry d is the index (into y_values) of the outcome under treatment d.
struct OutcomeResponseType {
    std::vector<int> assignments;

    int operator[](int d) const { return assignments[static_cast<std::size_t>(d)]; }
    int size() const { return static_cast<int>(assignments.size()); }
    std::string to_string() const;
    friend auto operator<=>(const OutcomeResponseType&, const OutcomeResponseType&) = default;
};

struct LatentCell {
    OutcomeResponseType outcome;
    TreatmentResponseType treatment;
    friend auto operator<=>(const LatentCell&, const LatentCell&) = default;
};

void validate_treatment_type(const TreatmentResponseType& rt, const ProblemSpaces& spaces);
void validate_outcome_type(const OutcomeResponseType& ro, const ProblemSpaces& spaces);

// Sparse pmf q(r^o, r^t). Zero cells are dropped.
class LatentDistribution {
public:
    LatentDistribution(ProblemSpaces spaces, std::map<LatentCell, Rational> masses);

    const ProblemSpaces& spaces() const { return spaces_; }
    const std::map<LatentCell, Rational>& masses() const { return q_; }
    Rational mass(const LatentCell& cell) const;
    std::map<TreatmentResponseType, Rational> treatment_marginal() const;
    Rational mean(int d) const;  // E_Q[Y_d]

    friend bool operator==(const LatentDistribution&, const LatentDistribution&) = default;

private:
    ProblemSpaces spaces_;
    std::map<LatentCell, Rational> q_;
};

ObservedDistribution push_forward(const LatentDistribution& q);

Rational beta(const ObservedDistribution& p, int d, int z);            // E[Y 1{D=d} | Z=z]
Rational treatment_prob(const ObservedDistribution& p, int d, int z);  // P{D=d | Z=z}

}  // namespace ivbounds
