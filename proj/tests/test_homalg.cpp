#include "eqih/homalg.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace eqih;
using eqih::test::mat;

namespace {

// Cochains of a circle: two vertices, edges v1 -> v2 and v2 -> v1.
Complex circle() {
    return Complex::plain(0, {SubspaceQ::full(2), SubspaceQ::full(2)}, {mat(2, 2, {-1, 1, 1, -1}), MatQ(0, 2)});
}

// B = (Q -1-> Q), A = its degree-1 part, C = B / A.
struct Interval {
    std::shared_ptr<const Complex> a, b, c;
    ChainMap i, s;
};

Interval interval() {
    Interval x;
    x.b = std::make_shared<Complex>(
        Complex::plain(0, {SubspaceQ::full(1), SubspaceQ::full(1)}, {mat(1, 1, {1}), MatQ(0, 1)}));
    x.a = std::make_shared<Complex>(
        Complex::plain(0, {SubspaceQ::zero(1), SubspaceQ::full(1)}, {mat(1, 1, {1}), MatQ(0, 1)}));
    x.c = std::make_shared<Complex>(Complex(0, {SubspaceQ::full(1), SubspaceQ::full(1)},
                                            {SubspaceQ::zero(1), SubspaceQ::full(1)}, {mat(1, 1, {1}), MatQ(0, 1)}));
    const std::vector<MatQ> id{MatQ::Identity(1, 1), MatQ::Identity(1, 1)};
    x.i = ChainMap{x.a, x.b, 0, id};
    x.s = ChainMap{x.b, x.c, 0, id};
    return x;
}

}  // namespace

TEST_CASE("cohomology of the circle") {
    const Complex c = circle();
    c.verify();
    const Cohomology h(c);
    CHECK(h.dims(0, 1) == std::vector<Index>{1, 1});
    const VecQ edge = mat(2, 1, {1, 0});
    CHECK(h.is_cocycle(1, edge));
    // The two edges are cohomologous.
    CHECK(h.class_of(1, edge) == h.class_of(1, VecQ(mat(2, 1, {0, 1}))));
    CHECK_THROWS_AS(h.class_of(0, VecQ(mat(2, 1, {1, 0}))), std::invalid_argument);
}

TEST_CASE("a non-complex is rejected") {
    const Complex bad = Complex::plain(0, {SubspaceQ::full(1), SubspaceQ::full(1), SubspaceQ::full(1)},
                                       {mat(1, 1, {1}), mat(1, 1, {1}), MatQ(0, 1)});
    CHECK_THROWS_AS(bad.verify(), NotAComplex);
}

TEST_CASE("quotient complexes and the connecting map") {
    const Interval x = interval();
    x.c->verify();
    verify_short_exact(x.i, x.s);
    const Cohomology ha(*x.a), hb(*x.b), hc(*x.c);
    CHECK(ha.dims(0, 1) == std::vector<Index>{0, 1});
    CHECK(hb.dims(0, 1) == std::vector<Index>{0, 0});
    CHECK(hc.dims(0, 1) == std::vector<Index>{1, 0});
    const MatQ delta = connecting_map(x.i, x.s, ha, hc, 0);
    REQUIRE(delta.rows() == 1);
    CHECK(delta(0, 0) != 0);
    // A different lift gives the same induced map.
    for (std::uint64_t seed = 1; seed < 6; ++seed) CHECK(connecting_map(x.i, x.s, ha, hc, 0, seed) == delta);
    const auto les = les_from_ses(x.i, x.s);
    CHECK(check_exact(les.sequence).exact());
}

TEST_CASE("a broken short sequence is reported") {
    Interval x = interval();
    x.s.maps[0] = MatQ::Zero(1, 1);
    CHECK_THROWS_AS(verify_short_exact(x.i, x.s), NotExact);
}

TEST_CASE("exactness check finds the failing node") {
    LongExactSequence seq;
    seq.nodes = {{"X", 0, 1}, {"Y", 0, 1}};
    seq.maps = {MatQ::Zero(1, 1)};
    const auto report = check_exact(seq);
    CHECK_FALSE(report.exact());
    CHECK(report.first_failure() == 0);

    seq.maps = {MatQ::Identity(1, 1)};
    CHECK(check_exact(seq).exact());
}

TEST_CASE("induced maps compose with representatives") {
    auto c = std::make_shared<Complex>(circle());
    const Cohomology h(*c);
    const ChainMap swap{c, c, 0, {mat(2, 2, {0, 1, 1, 0}), mat(2, 2, {0, 1, 1, 0})}};
    swap.verify();
    CHECK(induced_map(swap, h, h, 0) == MatQ::Identity(1, 1));
    CHECK(induced_map(swap, h, h, 1) == MatQ::Identity(1, 1));
}
