#include "eqih/fixtures.hpp"
#include "eqih/perverse.hpp"

#include <doctest.h>

using namespace eqih;

TEST_CASE("HOPF perverse data") {
    const Model m = make_hopf();
    const auto pd = perverse_data(m, Perversity());
    CHECK(pd.ih.dims(0, 2) == std::vector<Index>{1, 0, 1});
    CHECK(pd.hk.dims(0, 2) == std::vector<Index>{0, 0, 0});
    REQUIRE(pd.eub[0].size() == 1);
    CHECK(pd.eub[0](0, 0) != 0);
    CHECK(check_exact(cogysin_les(pd, m.top_degree).sequence).exact());
}

TEST_CASE("ROT has the zero Euler map") {
    const Model m = make_rot();
    const auto pd = perverse_data(m, Perversity());
    for (const auto& e : pd.eub) CHECK(is_zero(e));
}

TEST_CASE("CONE2 intersection cohomology across perversities") {
    const Model m = make_cone2();
    const auto pd = perverse_data(m, parse_perversity("apex=2"));
    CHECK(pd.ih.dims(0, 2) == std::vector<Index>{1, 0, 1});
    CHECK(build_omega(m, parse_perversity("apex=0")).dim(2) == 0);
}

TEST_CASE("inclusions go up the lattice only") {
    const Model m = make_cone2();
    CHECK_NOTHROW(inclusion(m, parse_perversity("apex=0"), parse_perversity("apex=2")).verify());
    CHECK_THROWS_AS(inclusion(m, parse_perversity("apex=2"), parse_perversity("apex=0")), std::invalid_argument);
}

TEST_CASE("the Euler map does not depend on the witness") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const Model m = make_random(seed, 2);
        for (const auto& p : working_lattice(m)) {
            const auto pd = perverse_data(m, p);
            for (int i = 0; i <= m.top_degree; ++i) {
                CAPTURE(seed);
                CAPTURE(i);
                CHECK(euler_map(m, pd, i, 17 + seed) == pd.eub[std::size_t(i)]);
                if (const auto closed = euler_map_closed_form(m, pd, i)) CHECK(*closed == pd.eub[std::size_t(i)]);
            }
        }
    }
}
