#pragma once

// Bounded cochain complexes, their cohomology, chain maps, and the long exact
// sequence of a short exact sequence of complexes.
//
// A Complex is a subquotient of a graded coordinate space: in degree k the
// cochains are space(k) / denominator(k), both subspaces of Q^ambient_dim(k),
// and the differential is a matrix on the whole ambient space. Plain
// complexes have a zero denominator; quotient complexes such as Omega_p/G_p
// reuse the ambient coordinates of Omega_p.

#include "eqih/ratla.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace eqih {

class NotAComplex : public std::runtime_error {
public:
    NotAComplex(int degree, const std::string& what)
        : std::runtime_error("not a complex at degree " + std::to_string(degree) + ": " + what), degree(degree) {}
    int degree;
};

class NotExact : public std::runtime_error {
public:
    NotExact(int degree, const std::string& what)
        : std::runtime_error("short sequence not exact at degree " + std::to_string(degree) + ": " + what),
          degree(degree) {}
    int degree;
};

class Complex {
public:
    Complex() = default;

    /// Degrees lo .. lo + spaces.size() - 1. `d[i]` maps ambient(lo+i) to
    /// ambient(lo+i+1); the last one must have zero rows. Empty `denominators`
    /// means all zero.
    Complex(int lo, std::vector<SubspaceQ> spaces, std::vector<SubspaceQ> denominators, std::vector<MatQ> d);

    static Complex plain(int lo, std::vector<SubspaceQ> spaces, std::vector<MatQ> d) {
        return Complex(lo, std::move(spaces), {}, std::move(d));
    }

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(spaces_.size()) - 1; }
    bool in_range(int k) const { return k >= lo() && k <= hi(); }

    Index ambient_dim(int k) const;
    /// Dimension of the cochain space (space / denominator).
    Index dim(int k) const;
    SubspaceQ space(int k) const;
    SubspaceQ denominator(int k) const;
    /// ambient(k+1) x ambient(k); zero-sized outside the range.
    MatQ differential(int k) const;

    /// Throws NotAComplex unless d preserves spaces and denominators and d*d
    /// lands in the denominator.
    void verify() const;

private:
    int lo_ = 0;
    std::vector<SubspaceQ> spaces_;
    std::vector<SubspaceQ> denominators_;
    std::vector<MatQ> d_;
};

/// Graded cohomology with a fixed basis of representatives in each degree.
class Cohomology {
public:
    Cohomology() = default;
    explicit Cohomology(const Complex& c);

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(degrees_.size()) - 1; }

    Index dim(int k) const;
    std::vector<Index> dims(int from, int to) const;

    const SubspaceQ& cycles(int k) const;
    const SubspaceQ& boundaries(int k) const;
    /// Columns are cocycles whose classes form the basis.
    MatQ representatives(int k) const;

    bool is_cocycle(int k, const VecQ& v) const;
    /// Coordinates of the class of a cocycle. Throws std::invalid_argument
    /// for a non-cocycle.
    VecQ class_of(int k, const VecQ& cocycle) const;
    MatQ classes_of(int k, const MatQ& cocycles) const;
    VecQ lift(int k, const VecQ& coordinates) const;

    /// Same cohomology, different basis of representatives in degree k.
    Cohomology with_representatives(int k, const MatQ& reps) const;

private:
    struct Degree {
        QuotientSpace<Rational> quotient;
        MatQ cycle_annihilator;
    };
    const Degree* at(int k) const;

    int lo_ = 0;
    std::vector<Index> ambient_;
    std::vector<Degree> degrees_;
};

struct ChainMap {
    std::shared_ptr<const Complex> source;
    std::shared_ptr<const Complex> target;
    int shift = 0;
    /// maps[k - source->lo()] : ambient_source(k) -> ambient_target(k + shift)
    std::vector<MatQ> maps;

    MatQ map(int k) const;
    /// Throws NotAComplex (with the offending degree) on a failed
    /// commutation or containment. Only even shifts are accepted: the
    /// library never needs the odd-shift sign convention.
    void verify() const;
};

/// Matrix of H^k(source) -> H^{k+shift}(target).
MatQ induced_map(const ChainMap& f, const Cohomology& hs, const Cohomology& ht, int k);

struct LesNode {
    std::string label;
    int degree = 0;
    Index dim = 0;
};

/// Nodes joined by maps[i] : nodes[i] -> nodes[i+1]. A closed start means the
/// map into nodes.front() is zero; a closed end means the map out of
/// nodes.back() is zero. Open ends are not checked.
struct LongExactSequence {
    std::vector<LesNode> nodes;
    std::vector<MatQ> maps;
    bool closed_start = true;
    bool closed_end = true;
};

struct ExactnessNode {
    std::string label;
    int degree = 0;
    Index dim = 0;
    Index rank_in = 0;
    Index rank_out = 0;
    bool composite_zero = true;
    bool checked = true;
    bool exact = true;
};

struct ExactnessReport {
    std::vector<ExactnessNode> nodes;
    bool exact() const;
    /// Index of the first failing node, or -1.
    int first_failure() const;
};

ExactnessReport check_exact(const LongExactSequence& seq);

/// Throws NotExact unless 0 -> A -i-> B -s-> C -> 0 is exact at cochain level
/// in every degree of B.
void verify_short_exact(const ChainMap& i, const ChainMap& s);

/// Connecting map H^k(C) -> H^{k+1}(A): lift, differentiate, pull back
/// through i. No extra sign. A nonzero `perturb` seeds a different lift
/// choice; the induced map must not change.
MatQ connecting_map(const ChainMap& i, const ChainMap& s, const Cohomology& ha, const Cohomology& hc, int k,
                    std::uint64_t perturb = 0);

struct SesLongExact {
    LongExactSequence sequence;
    /// connecting[k - from] : H^k(C) -> H^{k+1}(A)
    std::vector<MatQ> connecting;
};

/// Long exact sequence H^k(A) -> H^k(B) -> H^k(C) -> H^{k+1}(A) for
/// k = from .. to. Labels are prefixed by the given names.
SesLongExact les_from_ses(const ChainMap& i, const ChainMap& s, const Cohomology& ha, const Cohomology& hb,
                          const Cohomology& hc, int from, int to, bool closed_end,
                          const std::string& a_name = "A", const std::string& b_name = "B",
                          const std::string& c_name = "C");

SesLongExact les_from_ses(const ChainMap& i, const ChainMap& s);

}  // namespace eqih
