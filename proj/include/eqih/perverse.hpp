#pragma once

// Perverse complexes of a model: Omega_p, the Gysin term G_p, the co-Gysin
// quotient K_p = Omega_p / G_p, inclusions between perversities, and the
// Euler map eub_p : H^i(G_p) -> IH^{i+2}_p.

#include "eqih/homalg.hpp"
#include "eqih/model.hpp"

#include <memory>

namespace eqih {

/// A construction that must hold for every valid model failed; this points
/// at a bug, not at bad input.
class InternalInvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class WitnessNotFound : public InternalInvariantViolation {
public:
    explicit WitnessNotFound(int degree)
        : InternalInvariantViolation("no Gysin witness for a class in degree " + std::to_string(degree)) {}
};

/// +1 or -1 according to the parity of k.
inline int parity_sign(int k) { return k % 2 == 0 ? 1 : -1; }

/// Omega_p^k = { w in F_p^k : dw in F_p^{k+1} }.
Complex build_omega(const Model& m, const Perversity& p);
/// G_p^k = { b in Omega_{p-xbar}^k : E(b) in F_p^{k+2} + d(F_p^{k+1}) }, graded as a subcomplex of Omega_p.
Complex build_gysin(const Model& m, const Perversity& p);
/// Omega_p with G_p as denominator.
Complex build_cogysin(const Model& m, const Perversity& p);
/// Identity matrices Omega_p -> Omega_q. Throws std::invalid_argument unless p <= q.
ChainMap inclusion(const Model& m, const Perversity& p, const Perversity& q);

/// alpha in F_p^{k+1} with d(alpha) + (-1)^k E(beta) in F_p^{k+2}, or nullopt.
/// `perturb` adds a seeded element of Omega_p^{k+1} (another valid witness).
std::optional<VecQ> gysin_witness(const Model& m, const Perversity& p, int k, const VecQ& beta, std::uint64_t perturb = 0);

struct PerverseData {
    Perversity p;
    std::shared_ptr<const Complex> omega;
    std::shared_ptr<const Complex> gysin;
    std::shared_ptr<const Complex> cogysin;
    Cohomology ih;
    Cohomology hg;
    Cohomology hk;
    /// G_p -> Omega_p and Omega_p -> K_p.
    ChainMap include_gysin;
    ChainMap project;
    /// eub[i] : H^i(G_p) -> IH^{i+2}_p for i = 0 .. top.
    std::vector<MatQ> eub;
    /// iota[i] : H^i(G_p) -> IH^i_p induced by inclusion.
    std::vector<MatQ> iota;
    /// cogysin_connecting[i] : H^i(K_p) -> H^{i+1}(G_p).
    std::vector<MatQ> cogysin_connecting;
    /// P_p on cohomology: IH^i_p -> H^i(K_p).
    std::vector<MatQ> project_classes;
};

/// Builds and checks everything above. Throws InternalInvariantViolation if
/// G_p is not a subcomplex of Omega_p or a witness is missing.
PerverseData perverse_data(const Model& m, const Perversity& p);

/// Euler map in degree i by the witness construction. A nonzero seed perturbs
/// both the cocycle representative (by a coboundary of G_p) and the witness.
MatQ euler_map(const Model& m, const PerverseData& data, int i, std::uint64_t perturb = 0);

/// (-1)^i [E(beta)] when E(beta) already lies in F_p for every representative
/// of H^i(G_p); nullopt otherwise.
std::optional<MatQ> euler_map_closed_form(const Model& m, const PerverseData& data, int i);

/// H(G) -> IH -> H(K) -> H^{+1}(G), degrees 0 .. top.
SesLongExact cogysin_les(const PerverseData& data, int top);

}  // namespace eqih
