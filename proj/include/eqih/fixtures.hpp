#pragma once

// Example models and a seeded random model generator, plus a brute-force
// oracle for equivariant cohomology that shares no code with the main
// pipeline beyond the model type and the rational scalar.

#include "eqih/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace eqih {

/// Hopf action on S^3: B = S^2, free, Euler class the generator of H^2.
Model make_hopf();
/// Rotation on S^2 x S^1: same base, zero Euler class.
Model make_rot();
/// Cone on the Hopf action: one fixed perverse stratum (the apex).
Model make_cone2();
/// One fixed non-perverse stratum; the Euler cocycle is exact at its level.
Model make_noperv();
/// Seeded random model. `size` bounds the per-degree dimension (1 .. 4).
Model make_random(std::uint64_t seed, int size);

/// "HOPF", "ROT", "CONE2", "NOPERV" or "RANDOM:seed:size".
Model make_fixture(const std::string& name);
std::vector<std::string> fixture_names();

/// Same model with euler_cocycle and E multiplied by `factor` (and the
/// product table left alone only when factor == 1; otherwise dropped).
Model with_scaled_euler(const Model& m, const Rational& factor);
/// Moves the model along g: A -> A' (per degree, invertible): d' = g d g^-1,
/// E' = g E g^-1, F' = g F, eps' = g eps. The product table is dropped.
Model transport(const Model& m, const std::vector<MatQ>& g, const std::string& name);
/// eps + shift with E unchanged and the product table dropped; meant for
/// exact shifts, which leave the Euler class alone.
Model with_shifted_euler(const Model& m, const VecQ& shift);

struct OracleResult {
    std::vector<Index> dims;
    /// u_ranks[n] : rank of u on H^n -> H^{n+2}, n + 2 <= N.
    std::vector<Index> u_ranks;
};

/// Equivariant cohomology dims through degree N by direct rank counting on
/// the full truncated complex.
OracleResult oracle_cohomology(const Model& m, const Perversity& p, int N);

}  // namespace eqih
