#include "eqih/fixtures.hpp"
#include "eqih/localize.hpp"

#include <doctest.h>

using namespace eqih;

TEST_CASE("localizations of the fixtures") {
    CHECK(localize(Session(make_hopf()), Perversity()) == LocalizedModule{0, 0});
    CHECK(localize(Session(make_rot()), Perversity()) == LocalizedModule{0, 0});
    const Session cone(make_cone2());
    CHECK(localize(cone, parse_perversity("apex=2")) == LocalizedModule{1, 0});
    CHECK(localize(cone, parse_perversity("apex=3")) == LocalizedModule{0, 0});
    const Session noperv(make_noperv());
    CHECK(localize(noperv, parse_perversity("s=0")) == LocalizedModule{1, 0});
}

TEST_CASE("a short truncation cannot be localized") {
    const Session s(make_cone2());
    CHECK_THROWS_AS(localize(s, parse_perversity("apex=2"), 4), TruncationTooSmall);
}

TEST_CASE("the localized Gysin sequence agrees with stabilization") {
    for (std::uint64_t seed = 200; seed < 215; ++seed) {
        const Session s(make_random(seed, 2));
        for (const auto& p : working_lattice(s.model())) {
            CAPTURE(seed);
            const auto ed = s.equivariant(p);
            const auto lg = localized_gysin(s.model(), *s.perverse(p), *ed);
            CHECK(lg.ranks_agree);
            CHECK(lg.exactness.exact());
            CHECK(lg.from_delta == localize(LambdaUModule::from(*ed)));
        }
    }
}

TEST_CASE("cone formula on every apex perversity") {
    const Session s(make_cone2());
    for (int v = -1; v <= 3; ++v) {
        CAPTURE(v);
        CHECK(cone_formula_check(s, Perversity({{"apex", v}})).agree());
    }
    CHECK_THROWS_AS(cone_prediction(make_hopf(), Perversity()), NotAConeModel);
}
