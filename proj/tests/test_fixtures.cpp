#include "eqih/fixtures.hpp"
#include "eqih/model_io.hpp"
#include "eqih/session.hpp"

#include <doctest.h>

using namespace eqih;

TEST_CASE("random models are deterministic in the seed") {
    for (std::uint64_t seed : {1u, 2u, 77u}) {
        CHECK(to_json(make_random(seed, 3)).dump() == to_json(make_random(seed, 3)).dump());
    }
    CHECK(to_json(make_random(1, 3)).dump() != to_json(make_random(2, 3)).dump());
    CHECK(to_json(make_fixture("RANDOM:5:2")).dump() == to_json(make_random(5, 2)).dump());
}

TEST_CASE("unknown fixture names are input errors") {
    CHECK_THROWS_AS(make_fixture("SPHERE"), std::invalid_argument);
    CHECK_THROWS_AS(make_fixture("RANDOM:x:2"), std::invalid_argument);
    CHECK_THROWS_AS(make_random(1, 9), std::invalid_argument);
}

TEST_CASE("HOPF ambient data") {
    const Model m = make_hopf();
    CHECK(m.dims == std::vector<Index>{1, 0, 1});
    CHECK(m.strata.empty());
    CHECK(m.euler(0)(0, 0) == 1);
    CHECK(is_zero(make_rot().euler(0)));
}

TEST_CASE("the oracle agrees with the pipeline") {
    for (std::uint64_t seed = 300; seed < 330; ++seed) {
        const Session s(make_random(seed, 3));
        for (const auto& p : working_lattice(s.model())) {
            CAPTURE(seed);
            const auto ed = s.equivariant(p);
            const auto oracle = oracle_cohomology(s.model(), p, ed->N);
            CHECK(oracle.dims == ed->dims());
            CHECK(oracle.u_ranks == ed->u_ranks());
        }
    }
}

TEST_CASE("the oracle on the cone") {
    const auto o = oracle_cohomology(make_cone2(), parse_perversity("apex=2"), 6);
    CHECK(o.dims == std::vector<Index>{1, 0, 1, 0, 1, 0, 1});
}
