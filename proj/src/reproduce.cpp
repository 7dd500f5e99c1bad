#include "ivbounds/reproduce.hpp"

#include "ivbounds/arum.hpp"
#include "ivbounds/closed_form.hpp"
#include "ivbounds/lp_bounds.hpp"
#include "ivbounds/problem_io.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cstdlib>

#ifndef IVBOUNDS_DATA_DIR
#define IVBOUNDS_DATA_DIR "data"
#endif

namespace ivbounds {

using detail::json;

bool ReproductionReport::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("IVBOUNDS_DATA_DIR"); env && *env) return env;
    return IVBOUNDS_DATA_DIR;
}

const std::vector<std::string>& reproduction_targets() {
    static const std::vector<std::string> names{"b2", "b3", "b4"};
    return names;
}

namespace {

std::string show(const Rational& r) { return r.to_decimal(4).value_or(r.pretty()); }
std::string show(const Interval& iv) { return "[" + show(iv.lo()) + ", " + show(iv.hi()) + "]"; }

Rational expect_value(const json& j, const std::string& where) { return detail::to_rational(j, where, true); }

Interval expect_interval(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw ParseError(where, "expected [lo, hi]");
    return Interval(expect_value(j[0], where + "/0"), expect_value(j[1], where + "/1"));
}

class Recorder {
public:
    explicit Recorder(std::string target) { report_.target = std::move(target); }

    void value(std::string name, const Rational& expected, const Rational& actual) {
        add(std::move(name), show(expected), show(actual), expected == actual);
    }
    void interval(std::string name, const Interval& expected, const Interval& actual) {
        add(std::move(name), show(expected), show(actual), expected == actual);
    }
    void flag(std::string name, bool expected, bool actual) {
        add(std::move(name), expected ? "yes" : "no", actual ? "yes" : "no", expected == actual);
    }
    void add_listing(std::string name, std::string expected, std::string actual, bool pass) {
        add(std::move(name), std::move(expected), std::move(actual), pass);
    }
    ReproductionReport take() { return std::move(report_); }

private:
    void add(std::string name, std::string expected, std::string actual, bool pass) {
        report_.checks.push_back({std::move(name), std::move(expected), std::move(actual), pass});
    }
    ReproductionReport report_;
};

json load_json(const std::filesystem::path& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError("", path.string() + ": malformed JSON: " + e.what());
    }
}

bool in_model(const LatentDistribution& q, const ResponseModel& model) {
    for (const auto& [cell, mass] : q.masses())
        if (!model.contains(cell.treatment)) return false;
    return true;
}

// Push-forward, model membership and the attained mean of one bundled witness table.
void check_witness(Recorder& rec, const std::filesystem::path& dir, const json& w, const std::string& mean_key, int d,
                   const ObservedDistribution& p, const ResponseModel& model) {
    const std::string file = w.at("file").get<std::string>();
    const ProblemFile qf = load_problem(dir / file);
    if (!qf.latent) throw ParseError("/latent", file + ": missing required field");
    const LatentDistribution& q = *qf.latent;
    rec.flag(file + " pushes forward to P", true, push_forward(q) == p);
    rec.flag(file + " lies in " + model.label(), w.at("in_model").get<bool>(), in_model(q, model));
    rec.value(file + " E[Y" + std::to_string(d) + "]", expect_value(w.at(mean_key), "/" + mean_key), q.mean(d));
}

ReproductionReport run_b2(const std::filesystem::path& dir) {
    Recorder rec("b2");
    const json ex = load_json(dir / "expected_b2.json");
    const ProblemFile f = load_problem(dir / "compliers_defiers.json");
    const auto& p = f.observed();
    const ResponseModel model = f.resolved_model();

    const Interval bp_expected = expect_interval(ex.at("balke_pearl_y0"), "/balke_pearl_y0");
    const Interval bp = balke_pearl_bounds(p).y0;
    rec.interval("Balke-Pearl Q{Y0=1}", bp_expected, bp);
    const Rational point = point_identify_compliers_defiers(p).first;
    rec.value("compliers/defiers point Q{Y0=1}", expect_value(ex.at("point_y0"), "/point_y0"), point);
    for (const auto& g : ex.at("gm_y0")) {
        const int z = g.at("zstar").get<int>();
        rec.interval("GM bound E[Y0] at z*=" + std::to_string(z), expect_interval(g.at("interval"), "/gm_y0"),
                     gm_interval(p, 0, z));
    }
    const Interval sharp = sharp_bounds_full(p, model, BoundsObjective::mean(0)).interval;
    rec.interval("sharp LP E[Y0] under " + model.label(), Interval::point(point), sharp);
    rec.flag("sharp interval strictly inside Balke-Pearl", true, bp.contains_in_interior(sharp));
    check_witness(rec, dir, ex.at("witness"), "mean_y0", 0, p, model);
    return rec.take();
}

ReproductionReport run_b3(const std::filesystem::path& dir) {
    Recorder rec("b3");
    const json ex = load_json(dir / "expected_b3.json");
    const ProblemFile f = load_problem(dir / "ordered.json");
    const auto& p = f.observed();
    const ResponseModel model = f.resolved_model();

    const Interval expected = expect_interval(ex.at("ordered_y1"), "/ordered_y1");
    rec.interval("ordered closed form E[Y1]", expected, ordered_middle_bounds(p));
    const Interval sharp = sharp_bounds_full(p, model, BoundsObjective::mean(1)).interval;
    rec.interval("sharp LP E[Y1] under " + model.label(), expected, sharp);
    for (const auto& g : ex.at("gm_y1")) {
        const int z = g.at("zstar").get<int>();
        const Interval gm = gm_interval(p, 1, z);
        rec.interval("GM bound E[Y1] at z*=" + std::to_string(z), expect_interval(g.at("interval"), "/gm_y1"), gm);
        rec.flag("sharp interval strictly inside GM bound at z*=" + std::to_string(z), true, gm.contains_in_interior(sharp));
    }
    for (const auto& w : ex.at("witnesses")) check_witness(rec, dir, w, "mean_y1", 1, p, model);
    return rec.take();
}

ReproductionReport run_b4(const std::filesystem::path& dir) {
    Recorder rec("b4");
    const json ex = load_json(dir / "expected_b4.json");
    const ProblemFile f = load_problem(dir / "arum3.json");
    const auto& p = f.observed();
    const ArumSpec spec = f.arum();
    const ResponseModel model = arum_support(spec);

    std::vector<TreatmentResponseType> expected_support;
    for (const auto& rt : ex.at("support")) expected_support.push_back({rt.get<std::vector<int>>()});
    std::sort(expected_support.begin(), expected_support.end());
    auto listing = [](const std::vector<TreatmentResponseType>& v) {
        std::string s;
        for (const auto& rt : v) s += (s.empty() ? "" : " ") + rt.to_string();
        return s;
    };
    const auto actual_support = model.support();
    rec.add_listing("ARUM support", listing(expected_support), listing(actual_support), expected_support == actual_support);

    const TargetingReport targeting = classify_targeting(spec);
    std::map<int, int> targets;
    for (const auto& [d, z] : ex.at("targets").items()) targets[std::stoi(d)] = z.get<int>();
    rec.flag("strict one-to-one targeting", true, targeting.kind == TargetingKind::StrictOneToOne);
    rec.flag("targets match", true, targeting.targets == targets);

    const Interval expected = expect_interval(ex.at("arum_y0"), "/arum_y0");
    rec.interval("ARUM closed form E[Y0]", expected, arum3_y0_bounds(p));
    const Interval sharp = sharp_bounds_full(p, model, BoundsObjective::mean(0)).interval;
    rec.interval("sharp LP E[Y0] under ARUM support", expected, sharp);
    for (const auto& g : ex.at("gm_y0")) {
        const int z = g.at("zstar").get<int>();
        const Interval gm = gm_interval(p, 0, z);
        rec.interval("GM bound E[Y0] at z*=" + std::to_string(z), expect_interval(g.at("interval"), "/gm_y0"), gm);
        rec.flag("GM bound at z*=" + std::to_string(z) + " properly contains sharp interval", true, gm.properly_contains(sharp));
    }
    for (const auto& w : ex.at("witnesses")) check_witness(rec, dir, w, "mean_y0", 0, p, model);
    return rec.take();
}

}  // namespace

ReproductionReport reproduce(std::string_view target, const std::filesystem::path& data_dir) {
    if (target == "b2") return run_b2(data_dir);
    if (target == "b3") return run_b3(data_dir);
    if (target == "b4") return run_b4(data_dir);
    throw Error(ErrorCode::InvalidArgument, "unknown reproduction target '" + std::string(target) + "' (b2, b3, b4)");
}

}  // namespace ivbounds
