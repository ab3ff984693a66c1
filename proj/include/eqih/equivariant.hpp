#pragma once

// The invariant-forms complex of pairs (alpha, beta), its tensor product with
// the polynomial ring in a degree-2 generator u, the u-action, and the Gysin
// sequences of both.
//
// Pairs live in A^k (+) A^{k-1}: coordinates of alpha first, then beta. The
// sign (-1)^{|beta|} = (-1)^{k-1} is produced by beta_sign() alone.

#include "eqih/perverse.hpp"

#include <functional>

namespace eqih {

class DecompositionMismatch : public std::logic_error {
public:
    DecompositionMismatch(int degree, const std::string& what)
        : std::logic_error("connecting map decomposition fails in degree " + std::to_string(degree) + ": " + what),
          degree(degree) {}
    int degree;
};

/// (-1)^{|beta|} for a pair of total degree k.
inline int beta_sign(int k) { return parity_sign(k - 1); }

/// Degrees 0 .. top+1; D(alpha, beta) = (d alpha + (-1)^{|beta|} E beta, d beta).
Complex build_eq1(const Model& m, const Perversity& p);
/// G_p shifted up by one: degree k holds G_p^{k-1}. Degrees 0 .. top+1.
Complex build_gysin_shifted(const Model& m, const Perversity& p);
/// tau_k : (alpha, beta) -> (-1)^{|beta|} (beta, 0), ambient(k) -> ambient(k-1).
MatQ eq1_twist(const Model& m, int k);

/// A complex C tensored with the polynomial ring in u (deg u = 2), built in
/// total degrees 0 .. N+1; cohomology is exact through degree N. Block j of
/// total degree n holds C^{n-2j} u^j.
struct LambdaTensor {
    struct Block {
        int j = 0;
        int k = 0;
        Index offset = 0;
        Index size = 0;
    };
    std::shared_ptr<const Complex> complex;
    int N = 0;
    std::vector<std::vector<Block>> blocks;

    const Block* find(int n, int j) const;
    /// Embeds a vector of C^k as the u^j block of total degree k + 2j.
    VecQ embed(int k, int j, const VecQ& v) const;
    /// The u^j block of a vector of total degree n.
    VecQ component(int n, int j, const VecQ& v) const;
};

/// `twist(k)` maps ambient(k) -> ambient(k-1) and contributes the u^{j+1}
/// part of the differential; pass nullptr for plain d (x) 1.
LambdaTensor tensor_lambda_u(const Complex& c, int N, const std::function<MatQ(int)>& twist);

/// Block-diagonal extension of a degree-preserving chain map.
ChainMap tensor_map(const ChainMap& f, const LambdaTensor& source, const LambdaTensor& target);
/// Multiplication by u (degree +2).
ChainMap u_action(const LambdaTensor& t);

/// Cohomology of a tensor with trivial twist, with representatives chosen as
/// products [c] u^j of the given per-degree representatives.
Cohomology product_cohomology(const LambdaTensor& t, const Cohomology& base);

struct Eq1Data {
    std::shared_ptr<const Complex> complex;
    std::shared_ptr<const Complex> gysin_shifted;
    Cohomology h;
    /// H(G[-1]) with the representatives of H(G_p).
    Cohomology h_gysin_shifted;
    /// Omega_p -> Eq1 (alpha, 0) and Eq1 -> G[-1] (beta).
    ChainMap pi;
    ChainMap oint;
};

Eq1Data eq1_data(const Model& m, const PerverseData& pd);

/// Gysin sequence IH_p -> IH_p(X) -> H^{*-1}(G_p) -> IH^{*+1}_p, degrees 0 .. top+1.
/// Throws DecompositionMismatch unless its connecting map equals eub_p.
SesLongExact gysin_les(const Model& m, const PerverseData& pd, const Eq1Data& eq);

struct EquivariantData {
    Perversity p;
    int N = 0;
    LambdaTensor omega_u;
    LambdaTensor eq_u;
    LambdaTensor gysin_u;
    Cohomology h;
    Cohomology h_omega;
    Cohomology h_gysin;
    ChainMap u;
    /// u_maps[n] : H^n -> H^{n+2}, n + 2 <= N.
    std::vector<MatQ> u_maps;
    ChainMap pi;
    ChainMap oint;

    std::vector<Index> dims() const { return h.dims(0, N); }
    std::vector<Index> u_ranks() const;
};

/// Throws InternalInvariantViolation if nabla * nabla != 0 or u does not commute with nabla.
EquivariantData build_equivariant(const Model& m, const PerverseData& pd, const Eq1Data& eq, int N);

int default_truncation(const Model& m);

/// Predicted connecting map H^n(G[-1] (x) Lambda u) -> H^{n+1}(Omega_p (x) Lambda u):
/// eub on each u^j block plus (-1)^{|beta|} iota shifted to u^{j+1}.
MatQ predicted_delta(const PerverseData& pd, const EquivariantData& eqd, int n);

struct EquivariantGysin {
    SesLongExact les;
    /// First degree where the computed connecting map differs from the
    /// prediction, or -1.
    int mismatch_degree = -1;
};

/// Equivariant Gysin sequence through degree N (the last node is left open).
EquivariantGysin equivariant_gysin_les(const PerverseData& pd, const EquivariantData& eqd);

}  // namespace eqih
