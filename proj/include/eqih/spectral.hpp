#pragma once

// Spectral sequence of a bounded decreasing filtration of a cochain complex,
// computed with the subspace formulas
//   Z_r^i = F^i  cap  nabla^-1(F^{i+r}),   B_r^i = F^i  cap  nabla(F^{i-r}),
//   E_r^i = Z_r^i / (Z_{r-1}^{i+1} + B_{r-1}^i),
// and its specialisation to the base-degree filtration of the equivariant
// complex, together with the Skjelbred sequence for perversity 0.

#include "eqih/equivariant.hpp"

#include <tuple>

namespace eqih {

class PropertyViolation : public std::runtime_error {
public:
    PropertyViolation(const std::string& property, int r, int i, int j, const std::string& what)
        : std::runtime_error(property + " fails at r=" + std::to_string(r) + " (" + std::to_string(i) + "," +
                             std::to_string(j) + "): " + what),
          property(property), r(r), i(i), j(j) {}
    std::string property;
    int r, i, j;
};

class IdentificationFails : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FilteredComplex {
    std::shared_ptr<const Complex> complex;
    /// Cohomology and pages are trusted for total degrees 0 .. valid_degree.
    int valid_degree = 0;
    /// F^i = 0 for i > top_filtration.
    int top_filtration = 0;
    /// levels[i][n - lo] = F^i C^n for i = 0 .. top_filtration.
    std::vector<std::vector<SubspaceQ>> levels;

    /// F^i C^n with F^{i<=0} = everything and F^{i>top} = 0.
    SubspaceQ level(int i, int n) const;
    /// Throws PropertyViolation unless decreasing and nabla-stable.
    void verify() const;
};

/// F^i = { w in C_{>=i} : nabla w in C_{>=i} }, C_{>=i} = pair blocks of degree >= i.
FilteredComplex base_degree_filtration(const EquivariantData& eqd);

struct SpectralCell {
    int i = 0;
    int j = 0;
    QuotientSpace<Rational> q;
    Index dim() const { return q.dim(); }
};

struct SpectralPage {
    int r = 0;
    std::map<std::pair<int, int>, SpectralCell> cells;
    /// d[(i,j)] : E_r^{i,j} -> E_r^{i+r, j-r+1}, present when the target
    /// total degree is still trusted.
    std::map<std::pair<int, int>, MatQ> d;

    Index dim(int i, int j) const;
    const SpectralCell* cell(int i, int j) const;
};

class SpectralSequence {
public:
    /// Pages 0 .. r_max plus E_infinity.
    SpectralSequence(FilteredComplex fc, int r_max);

    const FilteredComplex& filtered() const { return fc_; }
    int r_max() const { return static_cast<int>(pages_.size()) - 1; }
    const SpectralPage& page(int r) const { return pages_.at(std::size_t(r)); }
    const SpectralPage& infinity() const { return infinity_; }

    /// Matrix of classes in E_r^{i,j} of vectors of Z_r^{i}; throws if a column is outside Z_r.
    MatQ classes(int r, int i, int j, const MatQ& vectors) const;

    /// Generic checks: d_r d_r = 0, H(E_r, d_r) = E_{r+1} dimensionwise, and
    /// convergence to `h` in every trusted degree. Throws PropertyViolation.
    void check_generic(const Cohomology& h) const;

private:
    SpectralPage build(int r);
    const SubspaceQ& cycles(int r, int i, int n);
    const SubspaceQ& boundaries(int r, int i, int n);

    FilteredComplex fc_;
    const SubspaceQ& level(int i, int n);
    std::map<std::pair<int, int>, SubspaceQ> level_cache_;
    std::map<std::pair<int, int>, MatQ> annihilator_cache_;
    std::map<std::pair<int, int>, MatQ> image_cache_;
    std::map<std::tuple<int, int, int>, SubspaceQ> z_cache_;
    std::map<std::tuple<int, int, int>, SubspaceQ> b_cache_;
    std::vector<SpectralPage> pages_;
    SpectralPage infinity_;
};

/// Sign attached to the identification of E_2^{i,2j} with H^i(K_p) u^j;
/// it makes the third differential equal the Euler composites on the nose.
int identification_sign(int i, int j);

/// E_r^{i,2j} -> IH^i_p (j = 0) or H^i(K_p) (j > 0): class of the alpha part of
/// the u^j block, times identification_sign. Throws PropertyViolation if a
/// representative does not give a cocycle.
MatQ identification(const PerverseData& pd, const EquivariantData& eqd, const SpectralSequence& ss, int r, int i, int j);

struct D3Cell {
    int i = 0;
    int j = 0;  ///< source row is 2j
    MatQ engine;
    MatQ composite;
    bool equal = true;
};

struct SpectralReport {
    int r_max = 0;
    std::vector<std::string> passed;
    std::vector<D3Cell> d3;
    bool d3_nonzero = false;
};

/// Runs the whole battery on one perversity: odd rows, E_{2s} = E_{2s+1},
/// the explicit E_2 identifications, convergence, edge map surjectivity, and
/// (when `d3`) the third differential against eub o boundary and P o eub o boundary.
/// Throws PropertyViolation on the first failure.
SpectralReport check_basic_spectral_sequence(const Model& m, const PerverseData& pd, const EquivariantData& eqd,
                                             const SpectralSequence& ss, bool d3);

/// Vanishing of d_{2s+1} on rows 2j != 2s, for models passing skjelbred_eligible.
void check_odd_differentials(const SpectralSequence& ss);

struct SkjelbredData {
    LongExactSequence sequence;
    ExactnessReport exactness;
};

/// True when G_0 = Omega_{-xbar} and G_{-xbar} = Omega_{-xbar} as subspaces.
bool skjelbred_eligible(const Model& m, const PerverseData& zero, const PerverseData& minus_x);

/// H^n(Omega_0) -> IH^n_S1 -> [H(K_0) (x) u Lambda u]^n -> H^{n+1}(Omega_0), n = 0 .. N.
/// Throws IdentificationFails for ineligible models.
SkjelbredData skjelbred(const Model& m, const PerverseData& zero, const PerverseData& minus_x, const EquivariantData& eqd);

}  // namespace eqih
