#include "helpers.hpp"

#include <doctest.h>

using namespace eqih;
using eqih::test::mat;

TEST_CASE("rationals parse and print in lowest terms") {
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_string(parse_rational("-7")) == "-7");
    CHECK(parse_rational("0/5") == Rational(0));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("rank and kernel of an integer matrix") {
    const MatQ m = mat(3, 4, {1, 2, 3, 4, 2, 4, 6, 8, 0, 1, 1, 0});
    CHECK(rank(m) == 2);
    const auto k = kernel(m);
    CHECK(k.dim() == 2);
    CHECK(is_zero(MatQ(m * k.basis())));
    CHECK(image(m).dim() == 2);
}

TEST_CASE("subspaces have canonical bases") {
    const auto a = SubspaceQ::span(mat(3, 2, {1, 1, 1, -1, 0, 0}));
    const auto b = SubspaceQ::span(mat(3, 2, {1, 0, 0, 1, 0, 0}));
    CHECK(a == b);
    CHECK(a.contains(VecQ(mat(3, 1, {5, 7, 0}))));
    CHECK_FALSE(a.contains(VecQ(mat(3, 1, {0, 0, 1}))));
    CHECK(is_zero(MatQ(a.annihilator() * a.basis())));
}

TEST_CASE("sum, intersection, image and preimage") {
    const auto x = SubspaceQ::span(mat(3, 1, {1, 0, 0}));
    const auto y = SubspaceQ::span(mat(3, 1, {0, 1, 0}));
    const auto xy = sum(x, y);
    CHECK(xy.dim() == 2);
    CHECK(intersect(x, y).dim() == 0);
    CHECK(intersect(xy, SubspaceQ::span(mat(3, 2, {1, 0, 1, 0, 0, 1}))).dim() == 1);

    const MatQ f = mat(3, 3, {0, 1, 0, 0, 0, 1, 0, 0, 0});  // shift
    CHECK(apply(f, xy) == x);
    const auto pre = preimage(f, SubspaceQ::full(3), x);
    CHECK(pre.dim() == 2);  // span(e1, e2) maps into span(e1)
}

TEST_CASE("solve_preimage returns a solution or nothing") {
    const MatQ m = mat(2, 2, {1, 1, 2, 2});
    const auto sol = solve_preimage(m, VecQ(mat(2, 1, {3, 6})));
    REQUIRE(sol);
    CHECK(MatQ(m * *sol) == mat(2, 1, {3, 6}));
    CHECK_FALSE(solve_preimage(m, VecQ(mat(2, 1, {1, 0}))));
}

TEST_CASE("inverse of invertible and singular matrices") {
    const MatQ m = mat(2, 2, {2, 1, 1, 1});
    const auto inv = inverse(m);
    REQUIRE(inv);
    CHECK(MatQ(m * *inv) == MatQ::Identity(2, 2));
    CHECK_FALSE(inverse(mat(2, 2, {1, 2, 2, 4})));
}

TEST_CASE("quotient projection kills the denominator and fixes representatives") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto v = SubspaceQ::span(eqih::test::random_mat(rng, 5, 4));
        const auto w = intersect(v, SubspaceQ::span(eqih::test::random_mat(rng, 5, 3)));
        const auto q = quotient(v, w);
        CHECK(q.dim() == v.dim() - w.dim());
        CHECK(is_zero(MatQ(q.projection * w.basis())));
        CHECK(MatQ(q.projection * q.representatives) == MatQ::Identity(q.dim(), q.dim()));
    }
}

TEST_CASE("quotient requires containment") {
    const auto x = SubspaceQ::span(mat(2, 1, {1, 0}));
    const auto y = SubspaceQ::span(mat(2, 1, {0, 1}));
    CHECK_THROWS_AS(quotient(x, y), NotASubspace);
    CHECK_THROWS_AS(sum(x, SubspaceQ::full(3)), AmbientMismatch);
}
