#include "ivbounds/problem_io.hpp"

#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace ivbounds {

using detail::child;
using detail::json;
using detail::require;

namespace {

ProblemSpaces parse_spaces(const json& j, const std::string& where, bool strict) {
    const json& ys = require(j, "y_values", where);
    if (!ys.is_array()) throw ParseError(child(where, "y_values"), "expected an array");
    std::vector<Rational> y;
    for (std::size_t i = 0; i < ys.size(); ++i)
        y.push_back(detail::to_rational(ys[i], child(child(where, "y_values"), i), strict));
    int nd = detail::to_int(require(j, "n_treatments", where), child(where, "n_treatments"));
    int nz = detail::to_int(require(j, "n_instruments", where), child(where, "n_instruments"));
    return ProblemSpaces(std::move(y), nd, nz);
}

PTable parse_p(const json& j, const std::string& where, bool strict) {
    auto array_at = [](const json& v, const std::string& at) -> const json& {
        if (!v.is_array()) throw ParseError(at, "expected an array");
        return v;
    };
    PTable table;
    const json& zs = array_at(j, where);
    for (std::size_t z = 0; z < zs.size(); ++z) {
        const std::string wz = child(where, z);
        const json& ds = array_at(zs[z], wz);
        auto& row = table.emplace_back();
        for (std::size_t d = 0; d < ds.size(); ++d) {
            const std::string wd = child(wz, d);
            const json& ys = array_at(ds[d], wd);
            auto& cell = row.emplace_back();
            for (std::size_t y = 0; y < ys.size(); ++y) cell.push_back(detail::to_rational(ys[y], child(wd, y), strict));
        }
    }
    return table;
}

ModelSpec parse_model(const json& j, const std::string& where, const ProblemSpaces& spaces, bool strict) {
    if (!j.is_object()) throw ParseError(where, "expected an object");
    ModelSpec m;
    if (j.contains("builtin")) {
        const json& name = j["builtin"];
        if (!name.is_string()) throw ParseError(child(where, "builtin"), "expected a model name");
        m.kind = ModelSpec::Kind::Builtin;
        m.name = name.get<std::string>();
        if (auto it = j.find("params"); it != j.end()) {
            const std::string wp = child(where, "params");
            if (!it->is_object()) throw ParseError(wp, "expected an object");
            if (it->contains("zstar")) m.params.zstar = detail::to_int_vector((*it)["zstar"], child(wp, "zstar"));
        }
    } else if (j.contains("support")) {
        m.kind = ModelSpec::Kind::Support;
        const std::string ws = child(where, "support");
        const json& s = j["support"];
        if (!s.is_array()) throw ParseError(ws, "expected an array of treatment response types");
        for (std::size_t i = 0; i < s.size(); ++i) {
            TreatmentResponseType rt{detail::to_int_vector(s[i], child(ws, i))};
            try {
                validate_treatment_type(rt, spaces);
            } catch (const Error& e) {
                throw ParseError(child(ws, i), e.what());
            }
            m.support.push_back(std::move(rt));
        }
    } else if (j.contains("arum")) {
        m.kind = ModelSpec::Kind::Arum;
        const std::string wa = child(where, "arum");
        const json& g = require(j["arum"], "g", wa);
        const std::string wg = child(wa, "g");
        if (!g.is_array()) throw ParseError(wg, "expected an array [z][d]");
        for (std::size_t z = 0; z < g.size(); ++z) {
            if (!g[z].is_array()) throw ParseError(child(wg, z), "expected an array");
            auto& row = m.g.emplace_back();
            for (std::size_t d = 0; d < g[z].size(); ++d)
                row.push_back(detail::to_rational(g[z][d], child(child(wg, z), d), strict));
        }
    } else {
        throw ParseError(where, "expected one of 'builtin', 'support', 'arum'");
    }
    return m;
}

BoundsObjective parse_objective(const json& j, const std::string& where, bool strict) {
    if (!j.is_object()) throw ParseError(where, "expected an objective object");
    if (j.contains("mean")) return BoundsObjective::mean(detail::to_int(j["mean"], child(where, "mean")));
    if (j.contains("ate")) {
        auto jk = detail::to_int_vector(j["ate"], child(where, "ate"));
        if (jk.size() != 2) throw ParseError(child(where, "ate"), "expected [j, k]");
        return BoundsObjective::ate(jk[0], jk[1]);
    }
    if (j.contains("linear")) {
        const json& w = j["linear"];
        const std::string wl = child(where, "linear");
        if (!w.is_array()) throw ParseError(wl, "expected an array of weights");
        std::vector<Rational> weights;
        for (std::size_t i = 0; i < w.size(); ++i) weights.push_back(detail::to_rational(w[i], child(wl, i), strict));
        return BoundsObjective::linear(std::move(weights));
    }
    throw ParseError(where, "expected one of 'mean', 'ate', 'linear'");
}

std::vector<int> parse_zstar(const json& j, const std::string& where, const ProblemSpaces& spaces) {
    const int nd = spaces.n_treatments(), nz = spaces.n_instruments();
    if (j.is_array()) {
        auto out = detail::to_int_vector(j, where);
        if (static_cast<int>(out.size()) != nd)
            throw ParseError(where, "expected " + std::to_string(nd) + " entries, one per treatment");
        for (std::size_t d = 0; d < out.size(); ++d)
            if (out[d] < 0 || out[d] >= nz) throw ParseError(child(where, d), "instrument value out of range");
        return out;
    }
    if (!j.is_object()) throw ParseError(where, "expected an array or a {d: z} map");
    std::vector<int> out(static_cast<std::size_t>(nd), -1);
    for (const auto& [key, value] : j.items()) {
        int d = -1;
        try {
            d = std::stoi(key);
        } catch (const std::exception&) {
            throw ParseError(child(where, key), "key is not a treatment index");
        }
        if (d < 0 || d >= nd) throw ParseError(child(where, key), "treatment index out of range");
        const int z = detail::to_int(value, child(where, key));
        if (z < 0 || z >= nz) throw ParseError(child(where, key), "instrument value out of range");
        out[static_cast<std::size_t>(d)] = z;
    }
    for (int d = 0; d < nd; ++d)
        if (out[static_cast<std::size_t>(d)] < 0) throw ParseError(where, "no z* given for treatment " + std::to_string(d));
    return out;
}

QuerySpec parse_query(const json& j, const std::string& where, const ProblemSpaces& spaces, bool strict) {
    if (!j.is_object()) throw ParseError(where, "expected an object");
    QuerySpec q;
    if (auto it = j.find("objectives"); it != j.end()) {
        const std::string wo = child(where, "objectives");
        if (!it->is_array()) throw ParseError(wo, "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) q.objectives.push_back(parse_objective((*it)[i], child(wo, i), strict));
    }
    if (auto it = j.find("zstar"); it != j.end())
        q.zstar = parse_zstar(*it, child(where, "zstar"), spaces);
    if (auto it = j.find("method"); it != j.end()) {
        const std::string m = it->is_string() ? it->get<std::string>() : "";
        if (m == "lp") q.method = Method::Lp;
        else if (m == "closed_form" || m == "closed-form") q.method = Method::ClosedForm;
        else if (m == "both") q.method = Method::Both;
        else throw ParseError(child(where, "method"), "expected 'lp', 'closed_form' or 'both'");
    }
    return q;
}

LatentDistribution parse_latent(const json& j, const std::string& where, const ProblemSpaces& spaces, bool strict) {
    if (!j.is_array()) throw ParseError(where, "expected an array of latent cells");
    std::map<LatentCell, Rational> masses;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string wi = child(where, i);
        const json& e = j[i];
        const json& out = require(e, "outcome", wi);
        if (!out.is_array()) throw ParseError(child(wi, "outcome"), "expected an array of outcome values");
        OutcomeResponseType ro;
        for (std::size_t d = 0; d < out.size(); ++d) {
            const std::string wd = child(child(wi, "outcome"), d);
            auto idx = spaces.index_of(detail::to_rational(out[d], wd, strict));
            if (!idx) throw ParseError(wd, "value is not in y_values");
            ro.assignments.push_back(*idx);
        }
        TreatmentResponseType rt{detail::to_int_vector(require(e, "treatment", wi), child(wi, "treatment"))};
        LatentCell cell{std::move(ro), std::move(rt)};
        try {
            validate_outcome_type(cell.outcome, spaces);
            validate_treatment_type(cell.treatment, spaces);
        } catch (const Error& err) {
            throw ParseError(wi, err.what());
        }
        Rational mass = detail::to_rational(require(e, "mass", wi), child(wi, "mass"), strict);
        if (masses.contains(cell)) throw ParseError(wi, "duplicate latent cell");
        masses.emplace(std::move(cell), mass);
    }
    return LatentDistribution(spaces, std::move(masses));
}

}  // namespace

ResponseModel resolve_model(const ModelSpec& spec, const ProblemSpaces& spaces) {
    switch (spec.kind) {
        case ModelSpec::Kind::Builtin: return builtin(spec.name, spaces, spec.params);
        case ModelSpec::Kind::Support: return ResponseModel(spaces, spec.support, "support");
        case ModelSpec::Kind::Arum: return arum_support(ArumSpec(spaces, spec.g));
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model kind");
}

const ObservedDistribution& ProblemFile::observed() const {
    if (!p) throw ParseError("/p", "missing required field");
    return *p;
}

ResponseModel ProblemFile::resolved_model() const {
    return resolve_model(model.value_or(ModelSpec{}), spaces);
}

ArumSpec ProblemFile::arum() const {
    if (!model || model->kind != ModelSpec::Kind::Arum) throw ParseError("/model/arum", "missing required field");
    return ArumSpec(spaces, model->g);
}

ProblemFile parse_problem(std::string_view text, const ParseOptions& options) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("", "expected a top-level object");
    const bool strict = options.strict;
    ProblemFile f{parse_spaces(require(root, "spaces", ""), "/spaces", strict), {}, {}, {}, {}};
    if (auto it = root.find("p"); it != root.end()) f.p = validate_observed(parse_p(*it, "/p", strict), f.spaces);
    if (auto it = root.find("model"); it != root.end()) f.model = parse_model(*it, "/model", f.spaces, strict);
    if (auto it = root.find("query"); it != root.end()) f.query = parse_query(*it, "/query", f.spaces, strict);
    if (f.query.objectives.empty())
        for (int d = 0; d < f.spaces.n_treatments(); ++d) f.query.objectives.push_back(BoundsObjective::mean(d));
    if (auto it = root.find("latent"); it != root.end()) f.latent = parse_latent(*it, "/latent", f.spaces, strict);
    return f;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ProblemFile load_problem(const std::filesystem::path& path, const ParseOptions& options) {
    return parse_problem(read_text_file(path), options);
}

}  // namespace ivbounds
