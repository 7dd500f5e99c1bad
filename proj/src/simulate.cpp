#include "ivbounds/simulate.hpp"

#include "ivbounds/closed_form.hpp"
#include "ivbounds/lp_bounds.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace ivbounds {

using detail::child;
using detail::json;
using detail::require;

namespace {

std::vector<OutcomeResponseType> all_outcome_types(const ProblemSpaces& spaces) {
    const int nd = spaces.n_treatments(), ny = spaces.n_outcomes();
    std::vector<OutcomeResponseType> out;
    std::vector<int> cur(static_cast<std::size_t>(nd), 0);
    while (true) {
        out.push_back(OutcomeResponseType{cur});
        int i = nd - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == ny - 1) cur[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
    }
    return out;
}

constexpr double kFloatTolerance = 1e-7;

}  // namespace

LatentDistribution random_latent(const ResponseModel& model, std::uint64_t seed, long denominator) {
    if (denominator < 1) throw Error(ErrorCode::InvalidArgument, "denominator must be positive");
    const auto outcomes = all_outcome_types(model.spaces());
    std::vector<LatentCell> cells;
    for (const auto& rt : model.support())
        for (const auto& ro : outcomes) cells.push_back(LatentCell{ro, rt});

    std::mt19937_64 gen(seed);
    std::vector<double> e(cells.size());
    for (auto& x : e) {
        const double u = static_cast<double>(gen() >> 11) * 0x1p-53;  // [0, 1)
        x = -std::log1p(-u);
    }
    const double total = std::accumulate(e.begin(), e.end(), 0.0);

    std::vector<long> units(cells.size());
    std::vector<double> frac(cells.size());
    long assigned = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double scaled = e[i] / total * static_cast<double>(denominator);
        units[i] = static_cast<long>(std::floor(scaled));
        frac[i] = scaled - static_cast<double>(units[i]);
        assigned += units[i];
    }
    std::vector<std::size_t> order(cells.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    // Floating error can leave the floors off by more than the cell count; wrap around in that case.
    for (long left = denominator - assigned, i = 0; left > 0; --left, ++i) ++units[order[static_cast<std::size_t>(i) % order.size()]];
    for (long over = assigned - denominator, i = 0; over > 0; ++i) {
        auto& u = units[order[order.size() - 1 - static_cast<std::size_t>(i) % order.size()]];
        if (u > 0) --u, --over;
    }

    std::map<LatentCell, Rational> masses;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (units[i] > 0) masses.emplace(cells[i], Rational(units[i], denominator));
    return LatentDistribution(model.spaces(), std::move(masses));
}

std::string to_string(Comparison c) {
    switch (c) {
        case Comparison::Lp: return "lp";
        case Comparison::Gm: return "gm";
        case Comparison::Mi: return "mi";
        case Comparison::ExogeneityLp: return "exogeneity_lp";
    }
    return "lp";
}

SimulationConfig parse_simulation_config(std::string_view text, const ParseOptions& options) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    // Reuse the problem parser for the spaces and model blocks.
    json shell = json::object();
    shell["spaces"] = require(root, "spaces", "");
    shell["model"] = require(root, "model", "");
    ProblemFile pf = parse_problem(shell.dump(), options);

    SimulationConfig c{pf.spaces, *pf.model};
    if (auto it = root.find("replications"); it != root.end()) {
        c.replications = detail::to_int(*it, "/replications");
        if (c.replications < 1) throw ParseError("/replications", "must be at least 1");
    }
    if (auto it = root.find("seed"); it != root.end()) {
        if (!it->is_number_unsigned()) throw ParseError("/seed", "expected a nonnegative integer");
        c.seed = it->get<std::uint64_t>();
    }
    if (auto it = root.find("compare"); it != root.end()) {
        if (!it->is_array() || it->empty()) throw ParseError("/compare", "expected a nonempty array");
        c.compare.clear();
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string name = (*it)[i].is_string() ? (*it)[i].get<std::string>() : "";
            std::optional<Comparison> m;
            for (auto cand : {Comparison::Lp, Comparison::Gm, Comparison::Mi, Comparison::ExogeneityLp})
                if (to_string(cand) == name) m = cand;
            if (!m) throw ParseError(child("/compare", i), "expected lp, gm, mi or exogeneity_lp");
            c.compare.push_back(*m);
        }
    }
    if (auto it = root.find("float"); it != root.end()) {
        if (!it->is_boolean()) throw ParseError("/float", "expected a boolean");
        c.float_mode = it->get<bool>();
    }
    if (auto it = root.find("threads"); it != root.end()) c.threads = static_cast<unsigned>(detail::to_int(*it, "/threads"));
    if (auto it = root.find("denominator"); it != root.end()) {
        c.denominator = detail::to_int(*it, "/denominator");
        if (c.denominator < 1) throw ParseError("/denominator", "must be positive");
    }
    return c;
}

bool SimulationReport::passed() const {
    if (errors || zstar_failures || width_failures || balke_pearl_failures) return false;
    return !gm_holds || discrepant == 0;
}

namespace {

struct Context {
    const SimulationConfig& config;
    const ResponseModel& model;
    const ResponseModel& exogeneity;
    bool gm_holds;
    GmCheck gm;
    bool compliers_or_defiers;
};

bool is_lp(Comparison c) { return c == Comparison::Lp || c == Comparison::ExogeneityLp; }

ReplicateResult run_replicate(const Context& ctx, std::uint64_t seed) {
    const auto& cfg = ctx.config;
    const auto& spaces = cfg.spaces;
    const int nd = spaces.n_treatments(), nz = spaces.n_instruments();
    ReplicateResult r;
    r.seed = seed;
    try {
        const LatentDistribution q = random_latent(ctx.model, seed, cfg.denominator);
        const ObservedDistribution p = push_forward(q);

        std::vector<BoundsObjective> means;
        for (int d = 0; d < nd; ++d) means.push_back(BoundsObjective::mean(d));

        std::optional<std::vector<Interval>> model_lp;
        auto exact_lp = [&](const ResponseModel& m) {
            std::vector<Interval> out;
            for (auto& b : sharp_bounds_reduced(p, m, means)) out.push_back(b.interval);
            return out;
        };

        for (auto c : cfg.compare) {
            std::vector<std::optional<Interval>> col;
            if (is_lp(c) && cfg.float_mode) {
                r.float_intervals.push_back(
                    sharp_bounds_reduced_float(p, c == Comparison::Lp ? ctx.model : ctx.exogeneity, means));
                r.intervals.emplace_back();
                continue;
            }
            if (c == Comparison::Lp) {
                model_lp = exact_lp(ctx.model);
                col.assign(model_lp->begin(), model_lp->end());
            } else if (c == Comparison::ExogeneityLp) {
                auto v = exact_lp(ctx.exogeneity);
                col.assign(v.begin(), v.end());
            } else if (c == Comparison::Gm) {
                col = gm_bounds(p).means;
            } else {
                col = mi_bounds(p).means;
            }
            r.intervals.push_back(std::move(col));
            r.float_intervals.emplace_back();
        }

        // Pairwise endpoint gaps. An empty set against a nonempty one counts as the full outcome range.
        const Rational range = spaces.y_upper() - spaces.y_lower();
        for (std::size_t a = 0; a < cfg.compare.size(); ++a) {
            for (std::size_t b = a + 1; b < cfg.compare.size(); ++b) {
                for (int d = 0; d < nd; ++d) {
                    const auto du = static_cast<std::size_t>(d);
                    const bool fa = !r.float_intervals[a].empty(), fb = !r.float_intervals[b].empty();
                    if (fa || fb) {
                        auto as_pair = [&](std::size_t m) -> std::optional<std::pair<double, double>> {
                            if (!r.float_intervals[m].empty()) return r.float_intervals[m][du];
                            const auto& iv = r.intervals[m][du];
                            if (!iv) return std::nullopt;
                            return std::pair{iv->lo().to_double(), iv->hi().to_double()};
                        };
                        auto x = as_pair(a), y = as_pair(b);
                        double gap = (x && y) ? std::max(std::abs(x->first - y->first), std::abs(x->second - y->second))
                                              : (x || y ? range.to_double() : 0.0);
                        r.float_discrepancy = std::max(r.float_discrepancy, gap);
                        continue;
                    }
                    const auto& x = r.intervals[a][du];
                    const auto& y = r.intervals[b][du];
                    Rational gap;
                    if (x && y) gap = max((x->lo() - y->lo()).abs(), (x->hi() - y->hi()).abs());
                    else if (x || y) gap = range;
                    if (gap > r.discrepancy) r.discrepancy = gap;
                }
            }
        }

        if (ctx.gm_holds) {
            auto marginal = q.treatment_marginal();
            bool all_positive = std::all_of(ctx.model.support().begin(), ctx.model.support().end(),
                                            [&](const auto& rt) { return marginal.contains(rt); });
            if (all_positive) r.zstar_matches = zstar_from_p(p) == ctx.gm.zstar_sets;
        }

        for (int j = 0; j < nd; ++j) {
            for (int k = j + 1; k < nd; ++k) {
                auto min_out = [&](int d) {
                    Rational m = 1 - treatment_prob(p, d, 0);
                    for (int z = 1; z < nz; ++z) m = min(m, 1 - treatment_prob(p, d, z));
                    return m;
                };
                const Rational expected = (spaces.y_upper() - spaces.y_lower()) * (min_out(j) + min_out(k));
                if (ate_bounds(p, j, k).width() != expected) r.ate_width_matches = false;
            }
        }

        if (ctx.compliers_or_defiers) {
            bool interior = true;
            for (int z = 0; z < nz; ++z) {
                const Rational t = treatment_prob(p, 0, z);
                if (!(t > 0 && t < 1)) interior = false;
            }
            if (interior) {
                if (!model_lp) model_lp = exact_lp(ctx.model);
                const auto bp = balke_pearl_bounds(p);
                const auto& lp = *model_lp;
                r.inside_balke_pearl = lp[0].is_point() && lp[1].is_point() && bp.y0.contains_in_interior(lp[0]) &&
                                       bp.y1.contains_in_interior(lp[1]);
            }
        }
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

}  // namespace

SimulationReport run_simulation(const SimulationConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const ResponseModel model = resolve_model(config.model, config.spaces);
    const ResponseModel exogeneity = builtin("exogeneity_only", config.spaces);
    GmCheck gm = gm_witness(model);
    const bool cod = config.model.kind == ModelSpec::Kind::Builtin && config.model.name == "compliers_or_defiers";
    Context ctx{config, model, exogeneity, gm.holds(), gm, cod};

    SimulationReport rep;
    rep.model = model.label();
    rep.support_size = model.size();
    rep.gm_holds = gm.holds();
    rep.compare = config.compare;
    rep.float_mode = config.float_mode;
    rep.replicates.resize(static_cast<std::size_t>(config.replications));

    unsigned n_threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(config.replications));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < config.replications; i = next++)
            rep.replicates[static_cast<std::size_t>(i)] = run_replicate(ctx, config.seed + static_cast<std::uint64_t>(i));
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
        worker();
    }

    for (const auto& r : rep.replicates) {
        if (!r.error.empty()) {
            ++rep.errors;
            continue;
        }
        const bool float_gap = r.float_discrepancy > kFloatTolerance;
        if (!r.discrepancy.is_zero() || float_gap) ++rep.discrepant;
        if (r.discrepancy > rep.max_discrepancy) rep.max_discrepancy = r.discrepancy;
        rep.max_float_discrepancy = std::max(rep.max_float_discrepancy, r.float_discrepancy);
        if (r.zstar_matches) ++rep.zstar_checked;
        if (r.zstar_matches == false) ++rep.zstar_failures;
        if (!r.ate_width_matches) ++rep.width_failures;
        if (r.inside_balke_pearl == false) ++rep.balke_pearl_failures;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace ivbounds
