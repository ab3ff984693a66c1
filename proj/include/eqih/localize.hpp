#pragma once

// Localization of equivariant intersection cohomology at u: the Z2-graded
// ranks over Q(u), read off from the stable range of the truncated Lambda u
// module and, independently, from the localized Gysin sequence.

#include "eqih/poly.hpp"
#include "eqih/session.hpp"

namespace eqih {

class TruncationTooSmall : public std::runtime_error {
public:
    TruncationTooSmall(int N, const std::string& what)
        : std::runtime_error("truncation N=" + std::to_string(N) + " too small: " + what), N(N) {}
    int N;
};

class NotAConeModel : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Consecutive u-isomorphisms required above the stabilization degree.
inline constexpr int kStableSteps = 4;

struct LambdaUModule {
    int N = 0;
    std::vector<Index> dims;
    /// u_maps[n] : H^n -> H^{n+2}, n + 2 <= N.
    std::vector<MatQ> u_maps;
    /// Smallest n0 with u an isomorphism on H^n for n0 <= n <= N - 2.
    int stable_from = 0;

    /// Throws TruncationTooSmall with fewer than kStableSteps isomorphisms.
    static LambdaUModule from(const EquivariantData& eqd);
};

struct LocalizedModule {
    Index even = 0;
    Index odd = 0;
    friend bool operator==(const LocalizedModule&, const LocalizedModule&) = default;
};

LocalizedModule localize(const LambdaUModule& module);
LocalizedModule localize(const Session& s, const Perversity& p, int N = -1);

struct LocalizedGysin {
    /// delta[parity] : H^{parity}(G) (x) Q(u) -> IH^{parity} (x) Q(u), eub + (-1)^i u iota.
    PolyMatrix delta[2];
    Index delta_rank[2] = {0, 0};
    Index ih_dim[2] = {0, 0};
    Index gysin_dim[2] = {0, 0};
    /// IL ranks from delta_rank alone.
    LocalizedModule from_delta;
    /// The equivariant Gysin sequence over the stable window N-2 .. N.
    LongExactSequence stable;
    ExactnessReport exactness;
    /// Stable connecting maps have the same rank as delta over Q(u).
    bool ranks_agree = true;
};

/// Throws NotExact (with the failing node) when the stable window is not exact
/// or its ranks disagree with the fraction-field ranks of delta.
LocalizedGysin localized_gysin(const Model& m, const PerverseData& pd, const EquivariantData& eqd);

struct ConeCheck {
    int apex_perversity = 0;
    LocalizedModule predicted;
    LocalizedModule computed;
    bool agree() const { return predicted == computed; }
};

/// Predicted IL of a cone from link data: IH^{m-1}/ker(eub) (+) IH^m in the
/// parities of m-1 and m, m = p(apex). Throws NotAConeModel without link data.
LocalizedModule cone_prediction(const Model& m, const Perversity& p);
ConeCheck cone_formula_check(const Session& s, const Perversity& p);

}  // namespace eqih
