#include "eqih/poly.hpp"

#include <random>
#include <stdexcept>

namespace eqih {

Poly::Poly(Rational constant) {
    if (constant != 0) c_.push_back(std::move(constant));
}

Poly::Poly(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

Poly Poly::u() { return Poly(std::vector<Rational>{Rational(0), Rational(1)}); }

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::operator()(const Rational& u) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * u + *it;
    return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] -= b.c_[k];
    return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
}

Poly Poly::exact_div(const Poly& divisor) const {
    if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> rem = c_;
    const int dd = divisor.degree();
    if (degree() < dd) {
        if (!is_zero()) throw std::logic_error("inexact polynomial division");
        return Poly();
    }
    std::vector<Rational> q(std::size_t(degree() - dd + 1));
    for (int k = degree() - dd; k >= 0; --k) {
        const Rational f = rem[std::size_t(k + dd)] / divisor.leading();
        q[std::size_t(k)] = f;
        for (int t = 0; t <= dd; ++t) rem[std::size_t(k + t)] -= f * divisor.c_[std::size_t(t)];
    }
    for (const auto& r : rem)
        if (r != 0) throw std::logic_error("inexact polynomial division");
    return Poly(std::move(q));
}

std::string Poly::str() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        if (!out.empty()) out += " + ";
        out += to_string(c_[k]);
        if (k >= 1) out += "*u";
        if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
}

void PolyMatrix::set_block(Index row, Index col, const MatQ& constant, const MatQ& linear) {
    if (constant.rows() != linear.rows() || constant.cols() != linear.cols())
        throw std::invalid_argument("set_block: constant and linear parts differ in shape");
    if (row + constant.rows() > rows || col + constant.cols() > cols)
        throw std::out_of_range("set_block: block exceeds the matrix");
    for (Index i = 0; i < constant.rows(); ++i)
        for (Index j = 0; j < constant.cols(); ++j)
            (*this)(row + i, col + j) = Poly(std::vector<Rational>{constant(i, j), linear(i, j)});
}

MatQ PolyMatrix::evaluate(const Rational& u) const {
    MatQ out(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) out(i, j) = (*this)(i, j)(u);
    return out;
}

Index bareiss_rank(PolyMatrix m) {
    Poly previous(Rational(1));
    Index k = 0;
    for (; k < m.rows && k < m.cols; ++k) {
        Index pr = -1, pc = -1;
        for (Index i = k; i < m.rows && pr < 0; ++i)
            for (Index j = k; j < m.cols; ++j)
                if (!m(i, j).is_zero()) {
                    pr = i;
                    pc = j;
                    break;
                }
        if (pr < 0) break;
        if (pr != k)
            for (Index j = 0; j < m.cols; ++j) std::swap(m(pr, j), m(k, j));
        if (pc != k)
            for (Index i = 0; i < m.rows; ++i) std::swap(m(i, pc), m(i, k));
        const Poly pivot = m(k, k);
        for (Index i = k + 1; i < m.rows; ++i) {
            for (Index j = k + 1; j < m.cols; ++j)
                m(i, j) = (pivot * m(i, j) - m(i, k) * m(k, j)).exact_div(previous);
            m(i, k) = Poly();
        }
        previous = pivot;
    }
    return k;
}

Index rank_over_fractions(const PolyMatrix& m, std::uint64_t seed) {
    const Index full = std::min(m.rows, m.cols);
    if (full == 0) return 0;
    std::mt19937_64 rng(seed);
    const Rational point(static_cast<long>(rng() % 1000003) + 2, static_cast<long>(rng() % 997) + 1);
    if (rank(m.evaluate(point)) == full) return full;
    return bareiss_rank(m);
}

}  // namespace eqih
