#pragma once

// Finite model of the basic data of a circle action: a graded cochain
// complex A (standing in for the liftable forms on the orbit space), one
// nested chain of subspaces per singular stratum encoding perverse degree,
// an Euler cocycle and the operator E = (wedge with it).

#include "eqih/ratla.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eqih {

enum class StratumKind { mobile, fixed_nonperverse, fixed_perverse };

std::string to_string(StratumKind kind);
StratumKind parse_stratum_kind(const std::string& text);

struct Stratum {
    std::string name;
    StratumKind kind = StratumKind::mobile;
};

class StrataMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownStratum : public std::invalid_argument {
public:
    explicit UnknownStratum(const std::string& name) : std::invalid_argument("unknown stratum '" + name + "'") {}
};

/// Integer weight per singular stratum. Keys are stratum names; the map is
/// ordered so printing and comparison are deterministic.
class Perversity {
public:
    Perversity() = default;
    explicit Perversity(std::map<std::string, int> values) : values_(std::move(values)) {}

    int operator[](const std::string& stratum) const;
    const std::map<std::string, int>& values() const { return values_; }
    bool empty() const { return values_.empty(); }

    /// "apex=2,edge=0"; the empty perversity prints as "".
    std::string str() const;

    friend bool operator==(const Perversity&, const Perversity&) = default;
    friend auto operator<=>(const Perversity&, const Perversity&) = default;

private:
    std::map<std::string, int> values_;
};

/// Parses comma separated `stratum=int` assignments. Throws std::invalid_argument.
Perversity parse_perversity(const std::string& text);

Perversity operator+(const Perversity& p, const Perversity& q);
/// Pointwise difference clamped below at -1 (everything lower gives the zero complex).
Perversity operator-(const Perversity& p, const Perversity& q);
/// Pointwise comparison.
bool leq(const Perversity& p, const Perversity& q);

/// Graded multiplication table. entries[{a,b}][r][s] is the product of the
/// r-th basis vector of A^a with the s-th basis vector of A^b.
struct ProductTable {
    std::map<std::pair<int, int>, std::vector<std::vector<VecQ>>> entries;

    /// Product of x in A^a and y in A^b; zero when a+b is out of range or the
    /// pair is absent.
    VecQ multiply(int a, const VecQ& x, int b, const VecQ& y, Index target_dim) const;
};

/// Link data for cone models: cohomology dimensions of the link orbit space
/// and the Euler multiplication on it, keyed by source degree.
struct ConeData {
    std::string apex;
    std::vector<Index> link_dims;
    std::map<int, MatQ> link_eub;
};

struct Model {
    std::string name;
    int top_degree = 0;
    std::vector<Index> dims;
    /// d[k] : A^k -> A^{k+1}, k = 0 .. top_degree (d[top] has zero rows).
    std::vector<MatQ> d;
    std::vector<Stratum> strata;
    /// filtrations[S][level + 1][k] = F_S^level in degree k, level = -1 .. kmax(S).
    std::map<std::string, std::vector<std::vector<SubspaceQ>>> filtrations;
    VecQ euler_cocycle;
    /// euler_op[k] : A^k -> A^{k+2}.
    std::vector<MatQ> euler_op;
    std::optional<ProductTable> product;
    std::vector<Perversity> perversities;
    std::optional<ConeData> cone;
    bool normal = false;
    bool free = false;

    Index dim(int k) const { return k >= 0 && k <= top_degree ? dims[std::size_t(k)] : 0; }
    /// dim(k+1) x dim(k), zero outside the range.
    MatQ differential(int k) const;
    /// dim(k+2) x dim(k), zero outside the range.
    MatQ euler(int k) const;

    const Stratum& stratum(const std::string& name) const;
    int kmax(const std::string& stratum) const;
    /// F_S^level in degree k, level clamped to [-1, kmax(S)].
    SubspaceQ filtration(const std::string& stratum, int level, int k) const;
    /// F_p^k: intersection over all strata; the full space when there are none.
    SubspaceQ filtration(const Perversity& p, int k) const;

    /// Throws std::invalid_argument on inconsistent shapes.
    void check_shapes() const;
};

Perversity zero_perversity(const Model& m);
Perversity constant_perversity(const Model& m, int value);
/// 1 on fixed strata, 0 on mobile ones.
Perversity characteristic_perversity(const Model& m);
/// 0 / 1 / 2 on mobile / fixed non-perverse / fixed perverse strata.
Perversity euler_perversity(const Model& m);
/// True when some stratum has Euler perversity different from the characteristic one.
bool has_perverse_strata(const Model& m);
/// Throws StrataMismatch unless p assigns a value to exactly the model's strata.
void check_perversity(const Model& m, const Perversity& p);

/// The perversities requested by the model (or 0 when none are listed),
/// closed under p -> p - xbar and enlarged by 0, -xbar, ebar and p - ebar.
std::vector<Perversity> working_lattice(const Model& m);

struct ValidationCheck {
    std::string name;
    bool passed = true;
    std::string detail;
    /// Offending vector, if any, as rational strings.
    std::vector<std::string> counterexample;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool ok() const;
    const ValidationCheck* find(const std::string& name) const;
};

/// Checks every model-level axiom. Strict mode adds E(F_S^k) in F_S^{k+ebar(S)}
/// and filtration compatibility of the product.
ValidationReport validate(const Model& m, bool strict);

}  // namespace eqih
