#pragma once

// Comparing two models through a filtration-preserving chain isomorphism of
// their ambient complexes: optimality, f-relatedness of the Euler classes,
// and the equalities of equivariant invariants that relatedness forces.

#include "eqih/localize.hpp"

namespace eqih {

class InvalidIso : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A precondition of a comparison (optimality, relatedness) does not hold.
class PreconditionFailed : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Related models disagree on an invariant that relatedness determines.
class TheoremViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct ModelIso {
    /// f[k] : A_2^k -> A_1^k.
    std::vector<MatQ> f;
    /// Stratum of the second model -> stratum of the first.
    std::map<std::string, std::string> strata;

    static ModelIso identity(const Model& m);
};

/// Throws InvalidIso unless f is invertible per degree, commutes with d, maps
/// each filtration level of S onto the level of its partner, and the stratum
/// correspondence is a bijection.
void validate_iso(const ModelIso& iso, const Model& m1, const Model& m2);

/// Stratum kinds agree under the correspondence. Validates first.
bool is_optimal(const ModelIso& iso, const Model& m1, const Model& m2);

struct Relatedness {
    bool related = false;
    /// f(eps_2) - eps_1.
    VecQ discrepancy;
    /// gamma in Omega^1 at the Euler perversity of m1 with d gamma = discrepancy, when related.
    std::optional<VecQ> witness;
};

/// Throws PreconditionFailed when the iso is not optimal.
Relatedness f_related(const ModelIso& iso, const Model& m1, const Model& m2);

/// The perversity of m2 matching p on m1 under the correspondence.
Perversity transport_perversity(const ModelIso& iso, const Perversity& p1);

struct ConsequenceRow {
    Perversity p;
    std::vector<Index> dims1, dims2;
    std::vector<Index> u_ranks1, u_ranks2;
    LocalizedModule il1, il2;
};

struct ConsequenceReport {
    std::vector<ConsequenceRow> rows;
};

/// For every perversity of the working lattice of m1: equivariant dims,
/// u-ranks and IL agree. Throws PreconditionFailed unless f_related holds,
/// and TheoremViolation on the first disagreement.
ConsequenceReport consequence_check(const ModelIso& iso, const Session& s1, const Session& s2);

}  // namespace eqih
