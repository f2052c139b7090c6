#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrh/combinatorics.hpp"
#include "lrh/errors.hpp"

using namespace lrh;

TEST_CASE("codim of reference brackets") {
    CHECK(codim(Bracket(7, {4, 6, 7})) == 1);
    CHECK(codim(Bracket(6, {2, 4, 6})) == 3);
    for (int n = 2; n <= 7; ++n)
        for (int k = 1; k < n; ++k) CHECK(codim(identity_bracket(n, k)) == 0);
}

TEST_CASE("dual") {
    CHECK(dual(Bracket(6, {2, 4, 6})) == Bracket(6, {1, 3, 5}));
    CHECK(dual(bottom_bracket(7, 3)) == identity_bracket(7, 3));
    for (int n = 2; n <= 7; ++n)
        for (int k = 1; k < n; ++k)
            for (const auto& b : all_brackets(n, k)) {
                CHECK(dual(dual(b)) == b);
                CHECK(codim(dual(b)) == k * (n - k) - codim(b));
            }
}

TEST_CASE("partition convention") {
    CHECK(to_partition(Bracket(6, {2, 4, 6})) == std::vector<int>{2, 1, 0});
    for (const auto& b : all_brackets(7, 3)) {
        auto lam = to_partition(b);
        int s = 0;
        for (std::size_t i = 0; i < lam.size(); ++i) {
            s += lam[i];
            if (i) CHECK(lam[i] <= lam[i - 1]);
        }
        CHECK(s == codim(b));
    }
}

TEST_CASE("bracket count is binomial") {
    CHECK(all_brackets(6, 3).size() == 20);
    CHECK(all_brackets(8, 4).size() == 70);
}

TEST_CASE("LR oracle reference values") {
    Bracket b246(6, {2, 4, 6});
    CHECK(lr_coefficient_oracle(b246, b246, Bracket(6, {1, 3, 5})) == 2);
    CHECK(lr_coefficient_oracle(b246, b246, Bracket(6, {2, 3, 4})) == 1);
    CHECK(lr_coefficient_oracle(b246, b246, Bracket(6, {1, 2, 6})) == 1);
    Bracket b24(4, {2, 4});
    CHECK(lr_coefficient_oracle(b24, b24, Bracket(4, {1, 4})) == 1);
    CHECK(lr_coefficient_oracle(b24, b24, Bracket(4, {2, 3})) == 1);
    CHECK_THROWS_AS(lr_coefficient_oracle(b24, b24, Bracket(4, {1, 2})), InputError);
}

TEST_CASE("LR oracle identity and symmetry") {
    for (int n = 3; n <= 6; ++n)
        for (int k = 1; k < n; ++k) {
            auto bs = all_brackets(n, k);
            Bracket id = identity_bracket(n, k);
            for (const auto& w : bs) {
                for (const auto& s : bs)
                    if (codim(s) == codim(w)) CHECK(lr_coefficient_oracle(w, id, s) == (s == w ? 1 : 0));
                for (const auto& t : bs) CHECK(lr_product_oracle(w, t) == lr_product_oracle(t, w));
            }
        }
}

TEST_CASE("LR oracle: dual pairing gives the point class once") {
    for (int n = 3; n <= 6; ++n)
        for (int k = 1; k < n; ++k)
            for (const auto& w : all_brackets(n, k)) {
                auto prod = lr_product_oracle(w, dual(w));
                REQUIRE(prod.size() == 1);
                CHECK(prod.begin()->first == bottom_bracket(n, k));
                CHECK(prod.begin()->second == 1);
            }
}

TEST_CASE("parsing") {
    auto p = parse_problem("[2 4 6]^3 [1 3 5]", 6, 3);
    REQUIRE(p.conditions.size() == 2);
    CHECK(p.conditions[0].multiplicity == 3);
    CHECK(p.expanded().size() == 4);
    CHECK(p.str() == "[2 4 6]^3 [1 3 5]");
    CHECK(parse_problem("[2,4]^4", 4, 2).complete());
    CHECK_THROWS_AS(parse_problem("[2 4 6", 6, 3), InputError);
    CHECK_THROWS_AS(parse_problem("[4 2 6]", 6, 3), InputError);
    CHECK_THROWS_AS(parse_problem("[2 4 9]", 6, 3), InputError);
    CHECK_THROWS_AS(parse_problem("[2 4]", 6, 3), InputError);
    CHECK_THROWS_AS(parse_problem("[2 4 6]^0", 6, 3), InputError);
    CHECK_THROWS_AS(parse_problem("", 6, 3), InputError);
    CHECK_THROWS_AS(parse_problem("[2 4 6] x", 6, 3), InputError);
}
