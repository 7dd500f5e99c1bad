#pragma once

#include "ivbounds/core.hpp"
#include "ivbounds/interval.hpp"
#include "ivbounds/problem_io.hpp"
#include "ivbounds/response_types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ivbounds {

inline constexpr long kDefaultDenominator = 1'000'000;

// Cell masses e_i / sum(e) with e_i ~ Exp(1) (uniform on the simplex over support x Y^|D|),
// floored to multiples of 1/denominator; the leftover units go to the largest remainders.
LatentDistribution random_latent(const ResponseModel& model, std::uint64_t seed,
                                 long denominator = kDefaultDenominator);

enum class Comparison { Lp, Gm, Mi, ExogeneityLp };

std::string to_string(Comparison c);

struct SimulationConfig {
    ProblemSpaces spaces;
    ModelSpec model;
    int replications = 200;
    std::uint64_t seed = 1;
    std::vector<Comparison> compare = {Comparison::Lp, Comparison::Gm, Comparison::Mi, Comparison::ExogeneityLp};
    bool float_mode = false;  // LP columns solved in double precision
    unsigned threads = 0;     // 0: hardware concurrency
    long denominator = kDefaultDenominator;
};

SimulationConfig parse_simulation_config(std::string_view text, const ParseOptions& options = {});

struct ReplicateResult {
    std::uint64_t seed = 0;
    // One entry per treatment and per compared method; nullopt for an empty intersection bound.
    std::vector<std::vector<std::optional<Interval>>> intervals;  // [method][d]
    std::vector<std::vector<std::pair<double, double>>> float_intervals;  // [method][d], float mode LPs only
    Rational discrepancy;        // largest endpoint gap between any two methods
    double float_discrepancy = 0;
    std::optional<bool> zstar_matches;   // set when GM holds and every support type has mass
    bool ate_width_matches = true;
    std::optional<bool> inside_balke_pearl;  // compliers_or_defiers draws with interior take-up
    std::string error;
};

struct SimulationReport {
    std::string model;
    std::size_t support_size = 0;
    bool gm_holds = false;
    std::vector<Comparison> compare;
    bool float_mode = false;
    std::vector<ReplicateResult> replicates;

    std::size_t discrepant = 0;
    Rational max_discrepancy;
    double max_float_discrepancy = 0;
    std::size_t zstar_checked = 0;
    std::size_t zstar_failures = 0;
    std::size_t width_failures = 0;
    std::size_t balke_pearl_failures = 0;
    std::size_t errors = 0;
    double seconds = 0;

    // Discrepancies count only when GM holds; the other checks always count.
    bool passed() const;
};

SimulationReport run_simulation(const SimulationConfig& config);

}  // namespace ivbounds
