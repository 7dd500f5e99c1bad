#include "test_support.hpp"

#include "ivbounds/error.hpp"
#include "ivbounds/response_types.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ivbounds;
using testing::spaces_of;
using testing::types;

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<TreatmentResponseType> sorted(std::vector<TreatmentResponseType> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("enumerate_treatment_types") {
    CHECK(enumerate_treatment_types(spaces_of(2, 2, 2)) == types({{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
    CHECK(enumerate_treatment_types(spaces_of(2, 3, 2)).size() == 9);
    CHECK(enumerate_treatment_types(spaces_of(2, 3, 3)).size() == 27);
    try {
        enumerate_treatment_types(spaces_of(2, 4, 4), 100);
        FAIL("expected EnumerationTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EnumerationTooLarge);
    }
}

TEST_CASE("never_taker_partition") {
    auto check = [](std::vector<int> t, int nd, std::vector<int> never, std::vector<int> complied) {
        const auto part = never_taker_partition(TreatmentResponseType{std::move(t)}, nd);
        CHECK(part.never == never);
        CHECK(part.complied == complied);
    };
    check({0, 1}, 2, {}, {0, 1});
    check({0, 0}, 2, {1}, {0});
    check({2, 2}, 3, {0, 1}, {2});
}

TEST_CASE("response model construction") {
    const auto sp = spaces_of(2, 2, 2);
    const ResponseModel m(sp, types({{1, 0}, {0, 1}, {1, 0}}), "m");
    CHECK(m.support() == types({{0, 1}, {1, 0}}));
    CHECK(m.contains(TreatmentResponseType{{1, 0}}));
    CHECK_FALSE(m.contains(TreatmentResponseType{{1, 1}}));
    CHECK_THROWS_AS(ResponseModel(sp, {}, "empty"), Error);
    CHECK_THROWS_AS(ResponseModel(sp, types({{0, 2}}), "bad"), Error);
}

TEST_CASE("gm_witness examples") {
    const auto one_sided = gm_witness(builtin("one_sided_rct", spaces_of(2, 3, 3)));
    REQUIRE(one_sided.holds());
    CHECK(one_sided.encouragement().zstar == std::vector<int>{0, 1, 2});

    const auto cod = gm_witness(ResponseModel(spaces_of(2, 2, 2), types({{0, 1}, {1, 0}}), "cod"));
    CHECK_FALSE(cod.holds());
    CHECK(cod.failing() == std::vector<int>{0, 1});
    CHECK_THROWS_AS(cod.encouragement(), Error);

    const auto klm = gm_witness(builtin("klm", spaces_of(2, 3, 3)));
    REQUIRE(klm.holds());
    CHECK(klm.encouragement().zstar == std::vector<int>{0, 1, 2});
}

TEST_CASE("unordered monotonicity examples") {
    CHECK(is_unordered_monotone(builtin("one_sided_rct", spaces_of(2, 2, 2))).holds());
    CHECK(is_unordered_monotone(builtin("cheng_small", spaces_of(2, 3, 3))).holds());

    // Three arms: (0,1,0) and (0,0,2) order 1{D_1=0} and 1{D_2=0} oppositely, yet GM holds.
    const auto three = is_unordered_monotone(builtin("one_sided_rct", spaces_of(2, 3, 3)));
    CHECK_FALSE(three.holds());
    CHECK(three.violations == std::vector<MonotonicityViolation>{{0, 1, 2}});

    const auto all = is_unordered_monotone(ResponseModel(spaces_of(2, 2, 2), types({{1, 0}, {0, 1}, {1, 1}, {0, 0}}), "all"));
    CHECK_FALSE(all.holds());
    CHECK(std::ranges::count(all.violations, MonotonicityViolation{1, 0, 1}) == 1);

    // Indicator sets of D=1 are {1,3} and {2,3}: they cross, yet z=0 and z=3 still encourage 0 and 1.
    const ResponseModel crossing(spaces_of(2, 2, 4), types({{0, 1, 0, 1}, {0, 0, 1, 1}}), "crossing");
    CHECK_FALSE(is_unordered_monotone(crossing).holds());
    const auto gm = gm_witness(crossing);
    REQUIRE(gm.holds());
    CHECK(gm.encouragement().zstar == std::vector<int>{0, 3});
}

TEST_CASE("ordered monotonicity") {
    const auto sp = spaces_of(2, 3, 3);
    const auto ordered = builtin("ordered", sp);
    CHECK(is_ordered_monotone(ordered));
    CHECK(ordered.size() == binomial(3 + 3 - 1, 3));
    CHECK_FALSE(is_ordered_monotone(ResponseModel(sp, types({{0, 1, 2}, {2, 1, 1}}), "x")));

    for (auto [nd, nz] : {std::pair{3, 3}, {3, 4}, {4, 3}, {2, 3}, {3, 2}}) {
        const auto m = builtin("ordered", spaces_of(2, nd, nz));
        CHECK(m.size() == binomial(static_cast<std::size_t>(nd + nz - 1), static_cast<std::size_t>(nz)));
        const auto gm = gm_witness(m);
        CHECK(std::ranges::count(gm.zstar_sets.front(), 0) == 1);
        CHECK(std::ranges::count(gm.zstar_sets.back(), nz - 1) == 1);
        for (int d = 1; d + 1 < nd; ++d) CHECK(gm.zstar_sets[static_cast<std::size_t>(d)].empty());
    }
}

TEST_CASE("builtin supports") {
    CHECK(builtin("kline_walters", spaces_of(2, 3, 2)).support() == sorted(types({{0, 0}, {1, 1}, {2, 2}, {0, 2}, {1, 2}})));
    CHECK(builtin("compliers_or_defiers", spaces_of(2, 2, 2)).support() == types({{0, 1}, {1, 0}}));

    std::vector<TreatmentResponseType> cheng;
    for (int a : {0})
        for (int b : {0, 1})
            for (int c : {0, 2})
                if (!(c == 2 && b != 1)) cheng.push_back({{a, b, c}});
    CHECK(builtin("cheng_small", spaces_of(2, 3, 3)).support() == sorted(cheng));

    std::vector<TreatmentResponseType> one_sided;
    for (int b : {0, 1})
        for (int c : {0, 2}) one_sided.push_back({{0, b, c}});
    CHECK(builtin("one_sided_rct", spaces_of(2, 3, 3)).support() == sorted(one_sided));

    CHECK(builtin("exogeneity_only", spaces_of(2, 3, 2)).size() == 9);

    auto code = [](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code([] { builtin("nonsense", spaces_of(2, 2, 2)); }) == ErrorCode::UnknownModel);
    CHECK(code([] { builtin("klm", spaces_of(2, 2, 2)); }) == ErrorCode::IncompatibleSpaces);
    CHECK(code([] { builtin("one_sided_rct", spaces_of(2, 3, 2)); }) == ErrorCode::IncompatibleSpaces);
    CHECK(code([] { builtin("gm_max", spaces_of(2, 2, 2), {{0}}); }) == ErrorCode::InvalidArgument);
    CHECK(code([] { builtin("gm_max", spaces_of(2, 2, 2), {{0, 5}}); }) == ErrorCode::IndexOutOfRange);
    CHECK(builtin_names().size() == 9);
}

TEST_CASE("gm_max round trip over every z* assignment") {
    for (auto [nd, nz] : {std::pair{2, 2}, {3, 3}, {3, 2}, {2, 3}}) {
        const auto sp = spaces_of(2, nd, nz);
        std::vector<int> m(static_cast<std::size_t>(nd), 0);
        for (;;) {
            const auto gm = gm_witness(builtin("gm_max", sp, {m}));
            CHECK(gm.holds());
            for (int d = 0; d < nd; ++d) CHECK(std::ranges::count(gm.zstar_sets[d], m[d]) == 1);
            int i = nd - 1;
            while (i >= 0 && m[i] == nz - 1) m[i--] = 0;
            if (i < 0) break;
            ++m[i];
        }
    }
}

TEST_CASE("unordered monotone supports satisfy generalized monotonicity") {
    std::size_t um_count = 0;
    for (auto [nd, nz] : {std::pair{2, 2}, {2, 3}, {3, 2}}) {
        const auto sp = spaces_of(2, nd, nz);
        const auto all = enumerate_treatment_types(sp);
        for (std::uint32_t mask = 1; mask < (1u << all.size()); ++mask) {
            std::vector<TreatmentResponseType> support;
            for (std::size_t i = 0; i < all.size(); ++i)
                if (mask >> i & 1u) support.push_back(all[i]);
            const ResponseModel m(sp, support, "sweep");
            if (!is_unordered_monotone(m).holds()) continue;
            ++um_count;
            CHECK(gm_witness(m).holds());
        }
    }
    CHECK(um_count > 0);
}
