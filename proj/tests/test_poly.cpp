#include "eqih/poly.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace eqih;

TEST_CASE("polynomial arithmetic") {
    const Poly u = Poly::u();
    const Poly a = u * u - Poly(1);  // u^2 - 1
    const Poly b = u + Poly(1);
    CHECK(a.degree() == 2);
    CHECK(a.exact_div(b) == u - Poly(1));
    CHECK_THROWS_AS(a.exact_div(u), std::logic_error);
    CHECK((a - a).is_zero());
    CHECK(a(Rational(3)) == Rational(8));
    CHECK(Poly(Rational(1, 2)).str() == "1/2");
}

TEST_CASE("Bareiss rank against evaluation at random points") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const Index rows = 1 + Index(rng() % 4), cols = 1 + Index(rng() % 4);
        PolyMatrix m(rows, cols);
        // Low-rank constant parts make the u terms matter.
        const MatQ c = eqih::test::random_mat(rng, rows, 1) * eqih::test::random_mat(rng, 1, cols);
        const MatQ l = trial % 3 == 0 ? MatQ(MatQ::Zero(rows, cols)) : eqih::test::random_mat(rng, rows, cols, -1, 1);
        m.set_block(0, 0, c, l);
        Index generic = 0;
        for (int k = 2; k < 12; ++k) generic = std::max(generic, rank(m.evaluate(Rational(k * 7 + 1, k))));
        CHECK(bareiss_rank(m) == generic);
        CHECK(rank_over_fractions(m) == generic);
        CHECK(rank_over_fractions(m, 99) == generic);
    }
}

TEST_CASE("a polynomial matrix that drops rank at one value of u") {
    PolyMatrix m(2, 2);
    m.set_block(0, 0, MatQ::Identity(2, 2) * Rational(-2), MatQ::Identity(2, 2));
    CHECK(rank(m.evaluate(Rational(2))) == 0);
    CHECK(bareiss_rank(m) == 2);
}
