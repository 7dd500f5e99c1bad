#include "ivbounds/cli.hpp"

#include "ivbounds/arum.hpp"
#include "ivbounds/closed_form.hpp"
#include "ivbounds/lp_bounds.hpp"
#include "ivbounds/problem_io.hpp"
#include "ivbounds/reproduce.hpp"
#include "ivbounds/simulate.hpp"

#include "json_util.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ivbounds {

using detail::json;
using detail::to_json;

namespace {

// Raised for failures that are the caller's fault (bad flags, unreadable input).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Outcome {
    int code = kExitPass;
    json report = json::object();
};

std::string join(const std::vector<int>& v, const char* sep = ",") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
    return s;
}

std::string set_string(const std::vector<int>& v) { return "{" + join(v) + "}"; }

std::string show(const std::optional<Interval>& iv) { return iv ? iv->to_string() : "empty"; }

std::string outcome_string(const OutcomeResponseType& ro, const ProblemSpaces& spaces) {
    std::string s = "(";
    for (int d = 0; d < ro.size(); ++d) s += (d ? "," : "") + spaces.y(ro[d]).pretty();
    return s + ")";
}

json latent_json(const LatentDistribution& q) {
    json cells = json::array();
    for (const auto& [cell, mass] : q.masses()) {
        json outcome = json::array();
        for (int d = 0; d < cell.outcome.size(); ++d) outcome.push_back(q.spaces().y(cell.outcome[d]).pretty());
        cells.push_back({{"outcome", outcome}, {"treatment", cell.treatment.assignments}, {"mass", mass.pretty()}});
    }
    return cells;
}

void print_latent(std::ostream& out, const LatentDistribution& q) {
    out << "  " << std::left << std::setw(16) << "r^o" << std::setw(12) << "r^t" << "mass\n";
    for (const auto& [cell, mass] : q.masses())
        out << "  " << std::setw(16) << outcome_string(cell.outcome, q.spaces()) << std::setw(12)
            << cell.treatment.to_string() << mass << "\n";
}

void print_certificate(std::ostream& out, const std::vector<CertificateEntry>& cert) {
    out << "infeasibility certificate (y'A <= 0, y'b > 0):\n";
    for (const auto& e : cert) out << "  " << std::left << std::setw(24) << e.row << e.weight << "\n";
}

json certificate_json(const std::vector<CertificateEntry>& cert) {
    json out = json::array();
    for (const auto& e : cert) out.push_back({{"row", e.row}, {"weight", e.weight.pretty()}});
    return out;
}

json sets_json(const std::vector<std::vector<int>>& sets) { return json(sets); }

void print_sets(std::ostream& out, const std::string& title, const std::vector<std::vector<int>>& sets) {
    out << title << ":";
    for (std::size_t d = 0; d < sets.size(); ++d) out << "  d=" << d << " " << set_string(sets[d]);
    out << "\n";
}

std::optional<Interval> closed_form_for(const BoundsObjective& obj, const ObservedDistribution& p,
                                        const BoundsReport& gm, const std::optional<std::vector<int>>& zstar) {
    switch (obj.kind()) {
        case BoundsObjective::Kind::Mean: return gm.means.at(static_cast<std::size_t>(obj.d()));
        case BoundsObjective::Kind::Ate: return ate_bounds(p, obj.j(), obj.k(), zstar);
        case BoundsObjective::Kind::Linear: return std::nullopt;
    }
    return std::nullopt;
}

Outcome cmd_bounds(const std::string& file, const std::optional<std::string>& method_flag, const ParseOptions& opts,
                   std::ostream& out) {
    const ProblemFile f = load_problem(file, opts);
    const auto& p = f.observed();
    const ResponseModel model = f.resolved_model();
    Method method = f.query.method;
    if (method_flag) {
        if (*method_flag == "lp") method = Method::Lp;
        else if (*method_flag == "closed-form" || *method_flag == "closed_form") method = Method::ClosedForm;
        else if (*method_flag == "both") method = Method::Both;
        else throw UsageError("--method must be lp, closed-form or both");
    }
    const bool want_lp = method != Method::ClosedForm, want_cf = method != Method::Lp;
    const GmCheck gm = gm_witness(model);
    const auto argmax = zstar_from_p(p);

    Outcome res;
    json& rep = res.report;
    rep["command"] = "bounds";
    rep["model"] = {{"label", model.label()}, {"support_size", model.size()}, {"gm_holds", gm.holds()},
                    {"zstar_sets", sets_json(gm.zstar_sets)}};
    rep["zstar_from_p"] = sets_json(argmax);

    out << "model " << model.label() << ": " << model.size() << " treatment response types, generalized monotonicity "
        << (gm.holds() ? "holds" : "fails") << "\n";
    print_sets(out, "z* sets from support", gm.zstar_sets);
    print_sets(out, "argmax_z P{D=d|Z=z}", argmax);

    std::vector<std::optional<SharpBounds>> lp(f.query.objectives.size());
    bool consistent = true;
    if (want_lp) {
        try {
            auto all = sharp_bounds_reduced(p, model, f.query.objectives);
            for (std::size_t i = 0; i < all.size(); ++i) lp[i] = std::move(all[i]);
        } catch (const InfeasibleModel& e) {
            consistent = false;
            out << "model cannot rationalize P; the identified set is empty\n";
            print_certificate(out, e.certificate());
            rep["certificate"] = certificate_json(e.certificate());
        }
        rep["consistent"] = consistent;
    }

    std::optional<BoundsReport> cf;
    if (want_cf) cf = gm_bounds(p, f.query.zstar);
    if (cf) out << "closed form uses z* = (" << join(cf->zstar) << ")\n";

    // Theory pins LP == closed form when GM holds, P is consistent and every z* used is an argmax.
    bool zstar_valid = true;
    if (cf)
        for (std::size_t d = 0; d < cf->zstar.size(); ++d)
            if (!std::ranges::count(argmax[d], cf->zstar[d])) zstar_valid = false;
    const bool assert_agreement = want_lp && want_cf && gm.holds() && consistent && zstar_valid;

    out << std::left << std::setw(14) << "objective";
    if (want_lp) out << std::setw(28) << "sharp LP";
    if (want_cf) out << std::setw(28) << "closed form";
    out << "\n";
    json rows = json::array();
    std::vector<std::string> mismatches;
    for (std::size_t i = 0; i < f.query.objectives.size(); ++i) {
        const auto& obj = f.query.objectives[i];
        json row = {{"objective", obj.label()}};
        out << std::setw(14) << obj.label();
        std::optional<Interval> lp_iv = lp[i] ? std::optional<Interval>(lp[i]->interval) : std::nullopt;
        if (want_lp) {
            out << std::setw(28) << show(lp_iv);
            row["lp"] = to_json(lp_iv);
        }
        std::optional<Interval> cf_iv;
        if (cf) {
            cf_iv = closed_form_for(obj, p, *cf, f.query.zstar);
            const bool applicable = obj.kind() != BoundsObjective::Kind::Linear;
            out << std::setw(28) << (applicable ? show(cf_iv) : "n/a");
            row["closed_form"] = applicable ? to_json(cf_iv) : json("n/a");
        }
        out << "\n";
        if (want_lp && cf && obj.kind() != BoundsObjective::Kind::Linear && lp_iv != cf_iv)
            mismatches.push_back(obj.label());
        rows.push_back(std::move(row));
    }
    rep["objectives"] = rows;

    if (want_lp && want_cf) {
        rep["agreement_required"] = assert_agreement;
        rep["mismatches"] = mismatches;
        if (assert_agreement) {
            if (mismatches.empty()) {
                out << "PASS sharp LP equals the closed form on every objective\n";
            } else {
                out << "FAIL sharp LP differs from the closed form on:";
                for (const auto& m : mismatches) out << " " << m;
                out << "\n";
                res.code = kExitAssertion;
            }
        } else if (!mismatches.empty()) {
            out << "discrepancies (agreement not implied: "
                << (!gm.holds() ? "generalized monotonicity fails"
                                : !consistent ? "model inconsistent with P" : "z* is not an argmax")
                << "):\n";
            out << "  " << std::setw(14) << "objective" << std::setw(16) << "lo(lp - cf)" << "hi(lp - cf)\n";
            for (std::size_t i = 0; i < f.query.objectives.size(); ++i) {
                const auto& obj = f.query.objectives[i];
                if (!std::ranges::count(mismatches, obj.label())) continue;
                auto cf_iv = closed_form_for(obj, p, *cf, f.query.zstar);
                out << "  " << std::setw(14) << obj.label();
                if (lp[i] && cf_iv)
                    out << std::setw(16) << (lp[i]->interval.lo() - cf_iv->lo()).pretty()
                        << (lp[i]->interval.hi() - cf_iv->hi()).pretty();
                else
                    out << "one side is empty";
                out << "\n";
            }
        }
    }
    rep["passed"] = res.code == kExitPass;
    return res;
}

Outcome cmd_check(const std::string& file, const ParseOptions& opts, std::ostream& out) {
    const ProblemFile f = load_problem(file, opts);
    const ResponseModel model = f.resolved_model();
    const auto result = consistency_check(f.observed(), model);
    Outcome res;
    res.report = {{"command", "check"}, {"model", model.label()}, {"consistent", result.feasible}};
    if (result.feasible) {
        out << "consistent: model " << model.label() << " rationalizes P; witness Q:\n";
        print_latent(out, *result.witness);
        res.report["witness"] = latent_json(*result.witness);
    } else {
        out << "inconsistent: model " << model.label() << " cannot rationalize P\n";
        print_certificate(out, result.certificate);
        res.report["certificate"] = certificate_json(result.certificate);
    }
    return res;
}

Outcome cmd_zstar(const std::string& file, const ParseOptions& opts, std::ostream& out) {
    const ProblemFile f = load_problem(file, opts);
    const ResponseModel model = f.resolved_model();
    const GmCheck gm = gm_witness(model);
    Outcome res;
    res.report = {{"command", "zstar"}, {"model", model.label()}, {"gm_holds", gm.holds()},
                  {"zstar_sets", sets_json(gm.zstar_sets)}, {"failing", gm.failing()}};
    out << "model " << model.label() << ": generalized monotonicity " << (gm.holds() ? "holds" : "fails") << "\n";
    print_sets(out, "Z*(d) from support", gm.zstar_sets);
    if (!gm.holds()) out << "no valid z* for treatments " << set_string(gm.failing()) << "\n";
    if (f.p) {
        const auto argmax = zstar_from_p(*f.p);
        print_sets(out, "argmax_z P{D=d|Z=z}", argmax);
        res.report["zstar_from_p"] = sets_json(argmax);
    }
    return res;
}

Outcome cmd_support(const std::string& file, const ParseOptions& opts, std::ostream& out) {
    const ProblemFile f = load_problem(file, opts);
    const ArumSpec spec = f.arum();
    const ResponseModel model = arum_support(spec);
    const TargetingReport targeting = classify_targeting(spec);
    const GmCheck gm = gm_witness(model);

    Outcome res;
    json types = json::array();
    out << "ARUM support (" << model.size() << " types):";
    for (const auto& rt : model.support()) {
        out << " " << rt.to_string();
        types.push_back(rt.assignments);
    }
    out << "\ntargeting: " << to_string(targeting.kind);
    json targets = json::object();
    if (targeting.kind == TargetingKind::Uniform) out << ", z* = (" << join(targeting.zstar) << ")";
    if (targeting.kind == TargetingKind::StrictOneToOne) {
        out << ", targets";
        for (auto [d, z] : targeting.targets) {
            out << " " << d << "<-z" << z;
            targets[std::to_string(d)] = z;
        }
        out << ", untargeted " << set_string(targeting.untargeted);
    }
    if (!targeting.reason.empty()) out << " (" << targeting.reason << ")";
    out << "\ngeneralized monotonicity " << (gm.holds() ? "holds" : "fails");
    if (!gm.holds()) out << " for treatments " << set_string(gm.failing());
    out << "\n";
    print_sets(out, "Z*(d) from support", gm.zstar_sets);
    res.report = {{"command", "support"},
                  {"support", types},
                  {"targeting", {{"kind", to_string(targeting.kind)},
                                 {"zstar", targeting.zstar},
                                 {"targets", targets},
                                 {"untargeted", targeting.untargeted},
                                 {"reason", targeting.reason}}},
                  {"gm_holds", gm.holds()},
                  {"zstar_sets", sets_json(gm.zstar_sets)}};
    if (spec.spaces.n_treatments() == 2) {
        const auto sets = binary_arum_zstar(spec);
        out << "binary sets: argmax g(z,1)-g(z,0) " << set_string(sets.upper) << ", argmin " << set_string(sets.lower)
            << "\n";
        res.report["binary"] = {{"upper", sets.upper}, {"lower", sets.lower}};
    }
    return res;
}

std::vector<Rational> parse_alpha(const std::string& text, int nd) {
    std::vector<Rational> alpha;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        auto r = Rational::try_parse(item);
        if (!r) throw UsageError("--alpha entry '" + item + "' is not an exact number");
        alpha.push_back(*r);
    }
    if (static_cast<int>(alpha.size()) != nd)
        throw UsageError("--alpha needs " + std::to_string(nd) + " comma-separated values");
    return alpha;
}

Outcome cmd_witness(const std::string& file, const std::string& alpha_text, const ParseOptions& opts, std::ostream& out) {
    const ProblemFile f = load_problem(file, opts);
    const auto& p = f.observed();
    const ResponseModel model = f.resolved_model();
    const int nd = p.spaces().n_treatments();
    const auto alpha = parse_alpha(alpha_text, nd);
    const auto seed = consistency_check(p, model);
    if (!seed.feasible) throw InfeasibleModel(model.label(), seed.certificate);

    const LatentDistribution q = witness_construction(p, *seed.witness, alpha);
    const GmCheck gm = gm_witness(model);
    Outcome res;
    json& rep = res.report;
    rep = {{"command", "witness"}, {"model", model.label()}, {"alpha", json::array()}, {"witness", latent_json(q)}};
    for (const auto& a : alpha) rep["alpha"].push_back(a.pretty());

    out << "witness for alpha = (" << alpha_text << ") under " << model.label() << ":\n";
    print_latent(out, q);
    const bool rationalizes = push_forward(q) == p;
    out << (rationalizes ? "PASS" : "FAIL") << " witness pushes forward to P\n";
    if (!rationalizes) res.code = kExitAssertion;

    const auto argmax = zstar_from_p(p);
    json means = json::array();
    for (int d = 0; d < nd; ++d) {
        const Rational theta = q.mean(d);
        json m = {{"d", d}, {"mean", theta.pretty()}};
        out << "E[Y" << d << "] = " << theta;
        if (gm.holds()) {
            const int z = argmax[static_cast<std::size_t>(d)].front();
            const Rational miss = 1 - treatment_prob(p, d, z);
            const Rational ad = alpha[static_cast<std::size_t>(d)];
            const Rational expected = beta(p, d, z) + (p.spaces().y_lower() * (1 - ad) + p.spaces().y_upper() * ad) * miss;
            const bool ok = expected == theta;
            out << "  " << (ok ? "PASS" : "FAIL") << " closed form " << expected;
            m["closed_form"] = expected.pretty();
            if (!ok) res.code = kExitAssertion;
        }
        out << "\n";
        means.push_back(std::move(m));
    }
    rep["means"] = means;
    rep["passed"] = res.code == kExitPass;
    return res;
}

json comparison_names(const std::vector<Comparison>& cs) {
    json out = json::array();
    for (auto c : cs) out.push_back(to_string(c));
    return out;
}

Outcome cmd_simulate(const std::string& file, const ParseOptions& opts, std::optional<unsigned> threads, std::ostream& out) {
    SimulationConfig cfg = parse_simulation_config(read_text_file(file), opts);
    if (threads) cfg.threads = *threads;
    const SimulationReport rep = run_simulation(cfg);

    Outcome res;
    res.code = rep.passed() ? kExitPass : kExitAssertion;
    out << "model " << rep.model << " (" << rep.support_size << " types), generalized monotonicity "
        << (rep.gm_holds ? "holds" : "fails") << ", " << rep.replicates.size() << " replicates, seeds " << cfg.seed
        << ".." << cfg.seed + rep.replicates.size() - 1 << (rep.float_mode ? ", float LPs" : ", exact") << "\n";
    out << "compared:";
    for (auto c : rep.compare) out << " " << to_string(c);
    out << "\n";

    json reps = json::array();
    for (const auto& r : rep.replicates) {
        json jr = {{"seed", r.seed}, {"discrepancy", r.discrepancy.pretty()}};
        if (rep.float_mode) jr["float_discrepancy"] = r.float_discrepancy;
        if (!r.error.empty()) jr["error"] = r.error;
        if (r.zstar_matches) jr["zstar_matches"] = *r.zstar_matches;
        jr["ate_width_matches"] = r.ate_width_matches;
        if (r.inside_balke_pearl) jr["inside_balke_pearl"] = *r.inside_balke_pearl;
        json ivs = json::object();
        for (std::size_t m = 0; m < rep.compare.size(); ++m) {
            json col = json::array();
            if (!r.float_intervals.empty() && !r.float_intervals[m].empty())
                for (auto [lo, hi] : r.float_intervals[m]) col.push_back({lo, hi});
            else if (!r.intervals.empty())
                for (const auto& iv : r.intervals[m]) col.push_back(to_json(iv));
            ivs[to_string(rep.compare[m])] = col;
        }
        jr["intervals"] = ivs;
        reps.push_back(std::move(jr));

        const bool off = !r.discrepancy.is_zero() || r.float_discrepancy > 1e-7;
        if (!r.error.empty()) out << "  seed " << r.seed << ": error: " << r.error << "\n";
        else if (off) {
            out << "  seed " << r.seed << ": discrepancy " << (rep.float_mode ? std::to_string(r.float_discrepancy) : r.discrepancy.pretty());
            for (std::size_t m = 0; m < rep.compare.size(); ++m) {
                out << "  " << to_string(rep.compare[m]) << "=";
                if (!r.intervals[m].empty())
                    for (const auto& iv : r.intervals[m]) out << show(iv);
                else
                    for (auto [lo, hi] : r.float_intervals[m]) out << "[" << lo << ", " << hi << "]";
            }
            out << "\n";
        }
    }
    out << "discrepant replicates: " << rep.discrepant << ", max discrepancy: "
        << (rep.float_mode ? std::to_string(rep.max_float_discrepancy) + " (float), " : "") << rep.max_discrepancy << "\n";
    out << "z* set mismatches: " << rep.zstar_failures << ", ATE width mismatches: " << rep.width_failures;
    if (rep.balke_pearl_failures) out << ", Balke-Pearl interior failures: " << rep.balke_pearl_failures;
    out << ", errors: " << rep.errors << "\n";
    out << std::fixed << std::setprecision(3) << "time: " << rep.seconds << " s\n" << std::defaultfloat;
    if (!rep.gm_holds && rep.discrepant) out << "discrepancies are expected: generalized monotonicity fails\n";
    out << (rep.passed() ? "PASS" : "FAIL") << " simulate " << rep.model << "\n";

    res.report = {{"command", "simulate"},
                  {"model", rep.model},
                  {"support_size", rep.support_size},
                  {"gm_holds", rep.gm_holds},
                  {"compare", comparison_names(rep.compare)},
                  {"float_mode", rep.float_mode},
                  {"replications", rep.replicates.size()},
                  {"seed", cfg.seed},
                  {"discrepant", rep.discrepant},
                  {"max_discrepancy", rep.max_discrepancy.pretty()},
                  {"zstar_failures", rep.zstar_failures},
                  {"width_failures", rep.width_failures},
                  {"balke_pearl_failures", rep.balke_pearl_failures},
                  {"errors", rep.errors},
                  {"passed", rep.passed()},
                  {"replicates", reps}};
    if (rep.float_mode) res.report["max_float_discrepancy"] = rep.max_float_discrepancy;
    // Timing is left out of the JSON report so reports stay deterministic per seed.
    return res;
}

Outcome cmd_reproduce(const std::string& target, const std::optional<std::string>& data, std::ostream& out) {
    const auto dir = data ? std::filesystem::path(*data) : default_data_dir();
    const ReproductionReport rep = reproduce(target, dir);
    Outcome res;
    res.code = rep.passed() ? kExitPass : kExitAssertion;
    json checks = json::array();
    for (const auto& c : rep.checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.actual;
        if (!c.pass) out << " (expected " << c.expected << ")";
        out << "\n";
        checks.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
    }
    out << (rep.passed() ? "PASS" : "FAIL") << " reproduce " << target << "\n";
    res.report = {{"command", "reproduce"}, {"target", target}, {"checks", checks}, {"passed", rep.passed()}};
    return res;
}

bool is_input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::LpFailure:
        case ErrorCode::Infeasible: return false;
        default: return true;
    }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact sharp identified sets for discrete instrumental-variable models", "ivbounds"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string report_path;
    bool lenient = false;
    app.add_option("--report", report_path, "Write a JSON report to this path");
    app.add_flag("--lenient", lenient, "Accept binary floating-point literals in input files");

    std::string file, alpha, target;
    std::optional<std::string> method, data;
    std::optional<unsigned> threads;
    bool arum_flag = false;

    auto* bounds = app.add_subcommand("bounds", "Sharp LP and closed-form bounds for a problem file");
    bounds->add_option("FILE", file)->required();
    bounds->add_option("--method", method, "lp, closed-form or both (default: the file's query)");

    auto* check = app.add_subcommand("check", "Consistency of P with the model, with witness or certificate");
    check->add_option("FILE", file)->required();

    auto* zstar = app.add_subcommand("zstar", "Z*(d) sets of the model's support");
    zstar->add_option("FILE", file)->required();

    auto* support = app.add_subcommand("support", "Support of an additive random utility model");
    support->add_flag("--arum", arum_flag, "Read the file's arum block")->required();
    support->add_option("FILE", file)->required();

    auto* witness = app.add_subcommand("witness", "Latent distribution attaining alpha-weighted bounds");
    witness->add_option("FILE", file)->required();
    witness->add_option("--alpha", alpha, "Comma-separated weights, one per treatment")->required();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of LP and closed-form bounds");
    simulate->add_option("CONFIG", file)->required();
    simulate->add_option("--threads", threads, "Worker threads (default: the config, else all cores)");

    auto* repro = app.add_subcommand("reproduce", "Golden pipelines on the bundled tables");
    repro->add_option("TARGET", target)->required()->check(CLI::IsMember(reproduction_targets()));
    repro->add_option("--data", data, "Directory holding the bundled tables");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitPass : kExitUsage;
    }

    const ParseOptions opts{.strict = !lenient};
    Outcome res;
    try {
        if (*bounds) res = cmd_bounds(file, method, opts, out);
        else if (*check) res = cmd_check(file, opts, out);
        else if (*zstar) res = cmd_zstar(file, opts, out);
        else if (*support) res = cmd_support(file, opts, out);
        else if (*witness) res = cmd_witness(file, alpha, opts, out);
        else if (*simulate) res = cmd_simulate(file, opts, threads, out);
        else res = cmd_reproduce(target, data, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InfeasibleModel& e) {
        err << "error: " << e.what() << "\n";
        print_certificate(err, e.certificate());
        return kExitAssertion;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_input_error(e.code()) ? kExitUsage : kExitAssertion;
    }

    if (!report_path.empty()) {
        std::ofstream rf(report_path);
        if (!rf) {
            err << "error: cannot write report to " << report_path << "\n";
            return kExitUsage;
        }
        res.report["exit_code"] = res.code;
        rf << res.report.dump(2) << "\n";
    }
    return res.code;
}

}  // namespace ivbounds
