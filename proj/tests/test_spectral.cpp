#include "eqih/fixtures.hpp"
#include "eqih/session.hpp"
#include "eqih/spectral.hpp"

#include <doctest.h>

using namespace eqih;

namespace {

SpectralSequence sequence_of(const Session& s, const Perversity& p) {
    FilteredComplex fc = base_degree_filtration(*s.equivariant(p));
    fc.verify();
    return SpectralSequence(std::move(fc), s.model().top_degree + 3);
}

std::map<std::pair<int, int>, Index> nonzero_cells(const SpectralPage& page) {
    std::map<std::pair<int, int>, Index> out;
    for (const auto& [key, cell] : page.cells)
        if (cell.dim() > 0) out[key] = cell.dim();
    return out;
}

}  // namespace

TEST_CASE("identification signs") {
    CHECK(identification_sign(0, 0) == 1);
    CHECK(identification_sign(0, 1) == 1);
    CHECK(identification_sign(1, 1) == -1);
    CHECK(identification_sign(0, 2) == -1);
    CHECK(identification_sign(2, 3) == -1);
}

TEST_CASE("ROT degenerates at the second page") {
    const Session s(make_rot());
    const auto ss = sequence_of(s, Perversity());
    for (int r = 2; r <= ss.r_max(); ++r)
        for (const auto& [key, d] : ss.page(r).d) CHECK(is_zero(d));
    CHECK(nonzero_cells(ss.page(2)) == nonzero_cells(ss.infinity()));
}

TEST_CASE("HOPF passes the whole battery with a nonzero third differential") {
    const Session s(make_hopf());
    const auto ss = sequence_of(s, Perversity());
    ss.check_generic(s.equivariant(Perversity())->h);
    const auto report = check_basic_spectral_sequence(s.model(), *s.perverse(Perversity()),
                                                      *s.equivariant(Perversity()), ss, true);
    for (const auto& cell : report.d3) CHECK(cell.equal);
}

TEST_CASE("random models pass the battery") {
    for (std::uint64_t seed = 40; seed < 55; ++seed) {
        const Session s(make_random(seed, 2));
        for (const auto& p : working_lattice(s.model())) {
            CAPTURE(seed);
            const auto ss = sequence_of(s, p);
            CHECK_NOTHROW(check_basic_spectral_sequence(s.model(), *s.perverse(p), *s.equivariant(p), ss, true));
        }
    }
}

TEST_CASE("the Skjelbred sequence is exact on the cone") {
    const Session s(make_cone2());
    const Model& m = s.model();
    const Perversity zero = zero_perversity(m);
    const auto pz = s.perverse(zero);
    const auto pm = s.perverse(zero - characteristic_perversity(m));
    REQUIRE(skjelbred_eligible(m, *pz, *pm));
    CHECK(skjelbred(m, *pz, *pm, *s.equivariant(zero)).exactness.exact());
}
