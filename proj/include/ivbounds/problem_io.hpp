#pragma once

#include "ivbounds/arum.hpp"
#include "ivbounds/core.hpp"
#include "ivbounds/lp_bounds.hpp"
#include "ivbounds/response_types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ivbounds {

struct ModelSpec {
    enum class Kind { Builtin, Support, Arum };
    Kind kind = Kind::Builtin;
    std::string name = "exogeneity_only";  // builtin name
    BuiltinParams params;
    std::vector<TreatmentResponseType> support;
    std::vector<std::vector<Rational>> g;  // arum shifters [z][d]
};

ResponseModel resolve_model(const ModelSpec& spec, const ProblemSpaces& spaces);

enum class Method { Lp, ClosedForm, Both };

struct QuerySpec {
    std::vector<BoundsObjective> objectives;  // defaults to every mean
    std::optional<std::vector<int>> zstar;
    Method method = Method::Both;
};

struct ProblemFile {
    ProblemSpaces spaces;
    std::optional<ObservedDistribution> p;
    std::optional<ModelSpec> model;
    QuerySpec query;
    std::optional<LatentDistribution> latent;

    const ObservedDistribution& observed() const;  // ParseError at "/p" when absent
    ResponseModel resolved_model() const;          // exogeneity_only when absent
    ArumSpec arum() const;                         // ParseError unless the model is an arum block
};

struct ParseOptions {
    bool strict = true;  // reject JSON floating-point literals where an exact value is expected
};

ProblemFile parse_problem(std::string_view text, const ParseOptions& options = {});
ProblemFile load_problem(const std::filesystem::path& path, const ParseOptions& options = {});

std::string read_text_file(const std::filesystem::path& path);

}  // namespace ivbounds
