#include "test_support.hpp"

#include "ivbounds/error.hpp"
#include "ivbounds/problem_io.hpp"

#include <doctest.h>

#include <string>

using namespace ivbounds;
using testing::R;

namespace {

const std::string kSpaces = R"("spaces": {"y_values": ["0", "1"], "n_treatments": 2, "n_instruments": 2})";

std::string with_p(const std::string& p, const std::string& rest = "") {
    return "{" + kSpaces + R"(, "p": )" + p + rest + "}";
}

const std::string kValidP = R"([[["0.1", "0.2"], ["0.3", "0.4"]], [["0.25", "0.25"], ["0.25", "0.25"]]])";

std::string parse_location(const std::string& text, const ParseOptions& opts = {}) {
    try {
        parse_problem(text, opts);
    } catch (const ParseError& e) {
        return e.location();
    }
    return "<no error>";
}

ErrorCode error_code(const std::string& text) {
    try {
        parse_problem(text);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("spaces and observed table") {
    const auto pf = parse_problem(with_p(kValidP));
    CHECK(pf.spaces.n_outcomes() == 2);
    CHECK(pf.observed()(0, 1, 1) == R("0.4"));
    CHECK(pf.observed()(1, 0, 0) == R("1/4"));
    CHECK(pf.resolved_model().label() == "exogeneity_only");
    CHECK(pf.query.method == Method::Both);
    REQUIRE(pf.query.objectives.size() == 2);
    CHECK(pf.query.objectives[1].label() == "E[Y1]");

    const auto no_p = parse_problem("{" + kSpaces + "}");
    CHECK_FALSE(no_p.p);
    CHECK(parse_location("{" + kSpaces + "}") == "<no error>");
    try {
        no_p.observed();
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.location() == "/p");
    }
}

TEST_CASE("validation errors propagate") {
    CHECK(error_code(with_p(R"([[["-0.1", "0.6"], ["0.3", "0.2"]], [["0.25", "0.25"], ["0.25", "0.25"]]])")) ==
          ErrorCode::NegativeMass);
    CHECK(error_code(with_p(R"([[["0.1", "0.6"], ["0.3", "0.2"]], [["0.25", "0.25"], ["0.25", "0.3"]]])")) ==
          ErrorCode::MassNotOne);
    CHECK(error_code(with_p(R"([[["0.5", "0.5"]], [["0.25", "0.25"], ["0.25", "0.25"]]])")) ==
          ErrorCode::DimensionMismatch);
    CHECK(error_code(R"({"spaces": {"y_values": ["1", "0"], "n_treatments": 2, "n_instruments": 2}})") ==
          ErrorCode::InvalidSpaces);
}

TEST_CASE("floating-point literals") {
    const std::string floats = R"([[[0.1, "0.2"], ["0.3", "0.4"]], [["0.25", "0.25"], ["0.25", "0.25"]]])";
    CHECK(parse_location(with_p(floats)) == "/p/0/0/0");
    const auto lenient = parse_problem(with_p(floats), {.strict = false});
    CHECK(lenient.observed()(0, 0, 0) == R("0.1"));
    // Integers are exact and accepted in strict mode.
    const auto ints = parse_problem(with_p(R"([[[0, 0], [1, 0]], [[0, 0], [0, 1]]])"));
    CHECK(ints.observed()(0, 1, 0) == 1);
    CHECK(parse_location(with_p(R"([[["abc", "0.2"], ["0.3", "0.4"]], [["0.25", "0.25"], ["0.25", "0.25"]]])")) ==
          "/p/0/0/0");
}

TEST_CASE("missing and malformed fields report their location") {
    CHECK(parse_location("{}") == "/spaces");
    CHECK(parse_location(R"({"spaces": {"y_values": ["0", "1"], "n_treatments": 2}})") == "/spaces/n_instruments");
    CHECK(parse_location(with_p(kValidP, R"(, "model": {"what": 1})")) == "/model");
    CHECK(parse_location(with_p(kValidP, R"(, "query": {"objectives": [{"ate": [0]}]})")) == "/query/objectives/0/ate");
    CHECK(parse_location(with_p(kValidP, R"(, "query": {"method": "simplex"})")) == "/query/method");
    CHECK(parse_location("{not json") == "");
}

TEST_CASE("models") {
    const auto sp = testing::spaces_of(2, 2, 2);
    const auto support = parse_problem(with_p(kValidP, R"(, "model": {"support": [[0, 1], [1, 0]]})"));
    CHECK(support.resolved_model().same_support(builtin("compliers_or_defiers", sp)));

    const auto gm = parse_problem(with_p(kValidP, R"(, "model": {"builtin": "gm_max", "params": {"zstar": [1, 0]}})"));
    CHECK(gm.resolved_model().same_support(builtin("gm_max", sp, {{1, 0}})));

    const auto arum = parse_problem(with_p(kValidP, R"(, "model": {"arum": {"g": [["0", "0"], ["0", "1"]]}})"));
    CHECK(arum.arum().g[1][1] == 1);
    CHECK_THROWS_AS(support.arum(), ParseError);

    try {
        parse_problem(with_p(kValidP, R"(, "model": {"builtin": "nope"})")).resolved_model();
        FAIL("expected UnknownModel");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownModel);
    }
    CHECK(parse_location(with_p(kValidP, R"(, "model": {"support": [[0, 2]]})")) == "/model/support/0");
}

TEST_CASE("queries") {
    const auto pf = parse_problem(with_p(kValidP, R"(, "query": {
        "objectives": [{"mean": 1}, {"ate": [1, 0]}, {"linear": ["1/2", "1/2"]}],
        "zstar": {"0": 1, "1": 0},
        "method": "closed-form"})"));
    REQUIRE(pf.query.objectives.size() == 3);
    CHECK(pf.query.objectives[0].kind() == BoundsObjective::Kind::Mean);
    CHECK(pf.query.objectives[1].label() == "E[Y1 - Y0]");
    CHECK(pf.query.objectives[2].weights(2) == std::vector<Rational>{R("1/2"), R("1/2")});
    CHECK(pf.query.zstar == std::vector<int>{1, 0});
    CHECK(pf.query.method == Method::ClosedForm);

    const auto arr = parse_problem(with_p(kValidP, R"(, "query": {"zstar": [0, 0], "method": "lp"})"));
    CHECK(arr.query.zstar == std::vector<int>{0, 0});
    CHECK(arr.query.method == Method::Lp);
    CHECK(parse_location(with_p(kValidP, R"(, "query": {"zstar": [0]})")) == "/query/zstar");
    CHECK(parse_location(with_p(kValidP, R"(, "query": {"zstar": {"0": 0, "1": 2}})")) == "/query/zstar/1");
}

TEST_CASE("latent distributions") {
    const auto pf = parse_problem("{" + kSpaces + R"(, "latent": [
        {"outcome": ["0", "1"], "treatment": [0, 1], "mass": "0.75"},
        {"outcome": ["1", "1"], "treatment": [1, 1], "mass": "1/4"}]})");
    REQUIRE(pf.latent);
    CHECK(pf.latent->mean(1) == 1);
    CHECK(pf.latent->mean(0) == R("0.25"));
    CHECK(error_code("{" + kSpaces + R"(, "latent": [{"outcome": ["0", "1"], "treatment": [0, 1], "mass": "0.5"}]})") ==
          ErrorCode::MassNotOne);
}

TEST_CASE("bundled problem files parse") {
    for (const char* name : {"compliers_defiers.json", "ordered.json", "arum3.json", "arum3_q_min.json",
                             "compliers_defiers_q.json", "ordered_q_ordered_min.json"}) {
        CAPTURE(name);
        CHECK_NOTHROW(testing::bundled(name));
    }
    CHECK(testing::bundled("compliers_defiers_q.json").latent.has_value());
    CHECK_THROWS_AS(load_problem(default_data_dir() / "does_not_exist.json"), Error);
}
