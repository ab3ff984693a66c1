#include "eqih/fixtures.hpp"
#include "eqih/session.hpp"

#include <doctest.h>

using namespace eqih;

TEST_CASE("HOPF equivariant cohomology is IH of the base") {
    const Session s(make_hopf());
    const auto ed = s.equivariant(Perversity());
    CHECK(ed->N == default_truncation(s.model()));
    std::vector<Index> expected(std::size_t(ed->N + 1), 0);
    expected[0] = expected[2] = 1;
    CHECK(ed->dims() == expected);
    CHECK(ed->u_ranks()[0] == 1);
    CHECK(s.eq1(Perversity())->h.dims(0, 3) == std::vector<Index>{1, 0, 0, 1});
}

TEST_CASE("ROT is free, so its equivariant cohomology is IH of the base") {
    const Session s(make_rot());
    const auto ed = s.equivariant(Perversity(), 6);
    CHECK(ed->dims() == std::vector<Index>{1, 0, 1, 0, 0, 0, 0});
    CHECK(ed->u_ranks() == std::vector<Index>{0, 0, 0, 0, 0});
    CHECK(s.eq1(Perversity())->h.dims(0, 3) == std::vector<Index>{1, 1, 1, 1});
}

TEST_CASE("Gysin sequences are exact with the predicted connecting maps") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const Session s(make_random(seed, 2));
        const Model& m = s.model();
        for (const auto& p : working_lattice(m)) {
            CAPTURE(seed);
            const auto pd = s.perverse(p);
            CHECK(check_exact(gysin_les(m, *pd, *s.eq1(p)).sequence).exact());
            const auto eg = equivariant_gysin_les(*pd, *s.equivariant(p));
            CHECK(eg.mismatch_degree == -1);
            CHECK(check_exact(eg.les.sequence).exact());
        }
    }
}

TEST_CASE("the tensor with u embeds and extracts blocks") {
    const Session s(make_hopf());
    const auto ed = s.equivariant(Perversity(), 4);
    VecQ one(1);
    one << 1;
    const VecQ x = ed->omega_u.embed(0, 2, one);
    CHECK(ed->omega_u.component(4, 2, x) == one);
    CHECK(ed->omega_u.find(4, 3) == nullptr);
}
