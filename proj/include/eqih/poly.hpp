#pragma once

// Polynomials in u over Q and matrices of them, with ranks over the fraction
// field Q(u) by fraction-free (Bareiss) elimination.

#include "eqih/ratla.hpp"

#include <cstdint>
#include <vector>

namespace eqih {

class Poly {
public:
    Poly() = default;
    Poly(Rational constant);
    /// coefficients[k] multiplies u^k.
    explicit Poly(std::vector<Rational> coefficients);

    static Poly u();

    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coefficients() const { return c_; }
    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
    Rational operator()(const Rational& u) const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Quotient of an exact division; throws std::logic_error on a nonzero remainder.
    Poly exact_div(const Poly& divisor) const;

    std::string str() const;

private:
    void trim();
    std::vector<Rational> c_;
};

struct PolyMatrix {
    PolyMatrix() = default;
    PolyMatrix(Index rows, Index cols) : rows(rows), cols(cols), entries(std::size_t(rows * cols)) {}

    Index rows = 0;
    Index cols = 0;
    std::vector<Poly> entries;  ///< row-major

    Poly& operator()(Index i, Index j) { return entries[std::size_t(i * cols + j)]; }
    const Poly& operator()(Index i, Index j) const { return entries[std::size_t(i * cols + j)]; }

    /// Sets the block at (row, col) to constant + u * linear.
    void set_block(Index row, Index col, const MatQ& constant, const MatQ& linear);
    MatQ evaluate(const Rational& u) const;
};

/// Rank over Q(u) by Bareiss elimination with full pivot search.
Index bareiss_rank(PolyMatrix m);

/// Rank over Q(u). Evaluation at a seeded random point is tried first; when it
/// already gives min(rows, cols) elimination is skipped, otherwise Bareiss decides.
Index rank_over_fractions(const PolyMatrix& m, std::uint64_t seed = 0x5eed);

}  // namespace eqih
