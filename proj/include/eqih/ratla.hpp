#pragma once

// Exact dense linear algebra over a field.
//
// Everything here is templated on the scalar type and written against
// Eigen dense storage. The rest of the library instantiates it with
// `Rational` (GMP-backed, always canonical), so rank decisions are exact:
// there are no tolerances anywhere in this header.

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eqih {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::mpz_int;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatQ = Mat<Rational>;
using VecQ = Vec<Rational>;
using Index = Eigen::Index;

class AmbientMismatch : public std::invalid_argument {
public:
    AmbientMismatch(Index a, Index b)
        : std::invalid_argument("ambient dimension mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b)) {}
};

class NotASubspace : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on malformed text
/// or a zero denominator.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

template <typename Derived>
bool is_zero(const Eigen::MatrixBase<Derived>& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0) return false;
    return true;
}

template <typename Scalar>
struct Echelon {
    Mat<Scalar> reduced;
    std::vector<Index> pivots;
    Index rank() const { return static_cast<Index>(pivots.size()); }
};

/// Reduced row echelon form by Gauss-Jordan elimination. Pivot choice is the
/// first nonzero entry, which over an exact field is as good as any.
template <typename Derived>
Echelon<typename Derived::Scalar> rref(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    Echelon<Scalar> out;
    out.reduced = m;
    auto& r = out.reduced;
    const Index rows = r.rows();
    const Index cols = r.cols();
    Index row = 0;
    for (Index col = 0; col < cols && row < rows; ++col) {
        Index pivot = -1;
        for (Index i = row; i < rows; ++i) {
            if (r(i, col) != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != row) r.row(pivot).swap(r.row(row));
        const Scalar inv = Scalar(1) / r(row, col);
        for (Index j = col; j < cols; ++j)
            if (r(row, j) != 0) r(row, j) *= inv;
        for (Index i = 0; i < rows; ++i) {
            if (i == row || r(i, col) == 0) continue;
            const Scalar f = r(i, col);
            for (Index j = col; j < cols; ++j)
                if (r(row, j) != 0) r(i, j) -= f * r(row, j);
        }
        out.pivots.push_back(col);
        ++row;
    }
    return out;
}

template <typename Derived>
Index rank(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    // Eliminate on the narrower side.
    if (m.rows() < m.cols()) return rref(m).rank();
    return rref(m.transpose()).rank();
}

/// A linear subspace of Scalar^ambient, stored as a column basis in reduced
/// column echelon form. The representative is canonical, so two subspaces are
/// equal exactly when their bases are entrywise equal.
template <typename Scalar>
class Subspace {
public:
    Subspace() = default;

    /// Span of the columns of `generators` (need not be independent).
    template <typename Derived>
    static Subspace span(const Eigen::MatrixBase<Derived>& generators) {
        Subspace s;
        s.ambient_ = generators.rows();
        if (generators.cols() == 0 || generators.rows() == 0) {
            s.basis_ = Mat<Scalar>(s.ambient_, 0);
            return s;
        }
        auto e = rref(generators.transpose());
        s.basis_ = e.reduced.topRows(e.rank()).transpose();
        return s;
    }

    static Subspace zero(Index ambient) {
        Subspace s;
        s.ambient_ = ambient;
        s.basis_ = Mat<Scalar>(ambient, 0);
        return s;
    }

    static Subspace full(Index ambient) {
        Subspace s;
        s.ambient_ = ambient;
        s.basis_ = Mat<Scalar>::Identity(ambient, ambient);
        return s;
    }

    Index ambient_dim() const { return ambient_; }
    Index dim() const { return basis_.cols(); }
    const Mat<Scalar>& basis() const { return basis_; }

    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_; }

    /// Rows spanning the annihilator: x is in the subspace iff annihilator() * x == 0.
    Mat<Scalar> annihilator() const {
        if (dim() == 0) return Mat<Scalar>::Identity(ambient_, ambient_);
        auto e = rref(basis_.transpose());
        return null_basis(e, ambient_).transpose();
    }

    template <typename Derived>
    bool contains(const Eigen::MatrixBase<Derived>& v) const {
        if (v.rows() != ambient_) throw AmbientMismatch(ambient_, v.rows());
        if (v.cols() == 0) return true;
        if (dim() == 0) return eqih::is_zero(v);
        Mat<Scalar> stacked(ambient_, dim() + v.cols());
        stacked << basis_, v;
        return rank(stacked) == dim();
    }

    bool contains(const Subspace& other) const { return contains(other.basis_); }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_.cols() == b.basis_.cols() &&
               a.basis_ == b.basis_;
    }

    /// Basis of the null space of the matrix whose echelon form is `e`.
    static Mat<Scalar> null_basis(const Echelon<Scalar>& e, Index cols) {
        std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
        for (Index p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
        Mat<Scalar> out = Mat<Scalar>::Zero(cols, cols - e.rank());
        Index k = 0;
        for (Index free = 0; free < cols; ++free) {
            if (is_pivot[static_cast<std::size_t>(free)]) continue;
            out(free, k) = Scalar(1);
            for (Index r = 0; r < e.rank(); ++r) out(e.pivots[static_cast<std::size_t>(r)], k) = -e.reduced(r, free);
            ++k;
        }
        return out;
    }

private:
    Index ambient_ = 0;
    Mat<Scalar> basis_;
};

using SubspaceQ = Subspace<Rational>;

template <typename Derived>
Subspace<typename Derived::Scalar> kernel(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    if (m.rows() == 0) return Subspace<Scalar>::full(m.cols());
    auto e = rref(m);
    return Subspace<Scalar>::span(Subspace<Scalar>::null_basis(e, m.cols()));
}

template <typename Derived>
Subspace<typename Derived::Scalar> image(const Eigen::MatrixBase<Derived>& m) {
    return Subspace<typename Derived::Scalar>::span(m);
}

template <typename Scalar>
Subspace<Scalar> sum(const Subspace<Scalar>& a, const Subspace<Scalar>& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw AmbientMismatch(a.ambient_dim(), b.ambient_dim());
    Mat<Scalar> both(a.ambient_dim(), a.dim() + b.dim());
    both << a.basis(), b.basis();
    return Subspace<Scalar>::span(both);
}

template <typename Scalar>
Subspace<Scalar> intersect(const Subspace<Scalar>& a, const Subspace<Scalar>& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw AmbientMismatch(a.ambient_dim(), b.ambient_dim());
    if (a.dim() == 0 || b.dim() == 0) return Subspace<Scalar>::zero(a.ambient_dim());
    if (a.is_full()) return b;
    if (b.is_full()) return a;
    Mat<Scalar> both(a.ambient_dim(), a.dim() + b.dim());
    both << a.basis(), -b.basis();
    auto k = kernel(both);
    return Subspace<Scalar>::span(a.basis() * k.basis().topRows(a.dim()));
}

/// Image of a subspace under a linear map.
template <typename Scalar>
Subspace<Scalar> apply(const Mat<Scalar>& f, const Subspace<Scalar>& s) {
    if (f.cols() != s.ambient_dim()) throw AmbientMismatch(f.cols(), s.ambient_dim());
    if (s.dim() == 0) return Subspace<Scalar>::zero(f.rows());
    return Subspace<Scalar>::span(f * s.basis());
}

/// { x in domain : f x in target }.
template <typename Scalar>
Subspace<Scalar> preimage(const Mat<Scalar>& f, const Subspace<Scalar>& domain,
                          const Subspace<Scalar>& target) {
    if (f.cols() != domain.ambient_dim()) throw AmbientMismatch(f.cols(), domain.ambient_dim());
    if (f.rows() != target.ambient_dim()) throw AmbientMismatch(f.rows(), target.ambient_dim());
    if (domain.dim() == 0 || target.is_full()) return domain;
    const Mat<Scalar> ann = target.annihilator();
    const Mat<Scalar> constraint = ann * f * domain.basis();
    if (constraint.rows() == 0) return domain;
    auto k = kernel(constraint);
    return Subspace<Scalar>::span(domain.basis() * k.basis());
}

/// Solution x of m x = target with free variables set to zero, or nullopt
/// when target is outside the column span.
template <typename Derived, typename Derived2>
std::optional<Vec<typename Derived::Scalar>> solve_preimage(const Eigen::MatrixBase<Derived>& m,
                                                            const Eigen::MatrixBase<Derived2>& target) {
    using Scalar = typename Derived::Scalar;
    if (target.rows() != m.rows()) throw AmbientMismatch(m.rows(), target.rows());
    Mat<Scalar> aug(m.rows(), m.cols() + 1);
    aug << m, target;
    auto e = rref(aug);
    Vec<Scalar> x = Vec<Scalar>::Zero(m.cols());
    for (Index r = 0; r < e.rank(); ++r) {
        const Index p = e.pivots[static_cast<std::size_t>(r)];
        if (p == m.cols()) return std::nullopt;
        x(p) = e.reduced(r, m.cols());
    }
    return x;
}

/// Inverse of a square matrix, or nullopt when singular.
template <typename Derived>
std::optional<Mat<typename Derived::Scalar>> inverse(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    const Index n = m.rows();
    if (m.cols() != n) return std::nullopt;
    if (n == 0) return Mat<Scalar>(0, 0);
    Mat<Scalar> aug(n, 2 * n);
    aug << m, Mat<Scalar>::Identity(n, n);
    auto e = rref(aug);
    if (e.rank() < n || e.pivots[static_cast<std::size_t>(n - 1)] != n - 1) return std::nullopt;
    return Mat<Scalar>(e.reduced.rightCols(n));
}

/// v / w together with a coordinate map. `projection` is defined on the whole
/// ambient space, has full row rank, kills w, and sends `representatives`
/// (a basis of a complement of w in v) to the identity.
template <typename Scalar>
struct QuotientSpace {
    Subspace<Scalar> numerator;
    Subspace<Scalar> denominator;
    Mat<Scalar> representatives;
    Mat<Scalar> projection;
    Index dim() const { return representatives.cols(); }
};

namespace detail {

/// Indices of the columns of `m` that extend the span of the first `fixed`
/// columns greedily, left to right.
template <typename Scalar>
std::vector<Index> extending_columns(const Mat<Scalar>& m, Index fixed) {
    auto e = rref(m);
    std::vector<Index> out;
    for (Index p : e.pivots)
        if (p >= fixed) out.push_back(p - fixed);
    return out;
}

/// Rows q of a left inverse of [w | reps]: pick rows where [w | reps] is
/// invertible, invert that square block, and zero the other columns.
template <typename Scalar>
Mat<Scalar> build_projection(const Mat<Scalar>& w, const Mat<Scalar>& reps) {
    const Index n = w.rows();
    const Index a = w.cols();
    const Index q = reps.cols();
    Mat<Scalar> frame(n, a + q);
    frame << w, reps;
    const auto rows = rref(Mat<Scalar>(frame.transpose())).pivots;
    if (static_cast<Index>(rows.size()) != a + q)
        throw std::logic_error("quotient: representatives not independent modulo denominator");
    Mat<Scalar> square(a + q, a + q);
    for (Index r = 0; r < a + q; ++r) square.row(r) = frame.row(rows[static_cast<std::size_t>(r)]);
    Mat<Scalar> aug(a + q, 2 * (a + q));
    aug << square, Mat<Scalar>::Identity(a + q, a + q);
    const Mat<Scalar> inv = rref(aug).reduced.rightCols(a + q);
    Mat<Scalar> out = Mat<Scalar>::Zero(q, n);
    for (Index r = 0; r < a + q; ++r) out.col(rows[static_cast<std::size_t>(r)]) = inv.block(a, r, q, 1);
    return out;
}

}  // namespace detail

template <typename Scalar>
QuotientSpace<Scalar> quotient(const Subspace<Scalar>& v, const Subspace<Scalar>& w) {
    if (v.ambient_dim() != w.ambient_dim()) throw AmbientMismatch(v.ambient_dim(), w.ambient_dim());
    if (!v.contains(w)) throw NotASubspace("quotient: denominator is not contained in numerator");
    QuotientSpace<Scalar> q{v, w, {}, {}};
    if (v.dim() == w.dim()) {
        q.representatives = Mat<Scalar>(v.ambient_dim(), 0);
        q.projection = Mat<Scalar>(0, v.ambient_dim());
        return q;
    }
    Mat<Scalar> frame(v.ambient_dim(), w.dim() + v.dim());
    frame << w.basis(), v.basis();
    const auto cols = detail::extending_columns(frame, w.dim());
    q.representatives = Mat<Scalar>(v.ambient_dim(), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
        q.representatives.col(static_cast<Index>(i)) = v.basis().col(cols[i]);
    q.projection = detail::build_projection(w.basis(), q.representatives);
    return q;
}

/// Same quotient with caller-chosen representatives. Throws NotASubspace if
/// they do not form a basis of v modulo w.
template <typename Scalar>
QuotientSpace<Scalar> quotient_with_representatives(const Subspace<Scalar>& v, const Subspace<Scalar>& w,
                                                    const Mat<Scalar>& reps) {
    if (v.ambient_dim() != w.ambient_dim()) throw AmbientMismatch(v.ambient_dim(), w.ambient_dim());
    if (reps.rows() != v.ambient_dim()) throw AmbientMismatch(v.ambient_dim(), reps.rows());
    if (!v.contains(w) || !v.contains(reps))
        throw NotASubspace("quotient: representatives or denominator outside numerator");
    if (reps.cols() != v.dim() - w.dim())
        throw NotASubspace("quotient: wrong number of representatives");
    Mat<Scalar> frame(v.ambient_dim(), w.dim() + reps.cols());
    frame << w.basis(), reps;
    if (rank(frame) != v.dim()) throw NotASubspace("quotient: representatives dependent modulo denominator");
    return QuotientSpace<Scalar>{v, w, reps, detail::build_projection(w.basis(), reps)};
}

/// Block-diagonal embedding helpers for direct sums of coordinate spaces.
template <typename Scalar>
Subspace<Scalar> direct_sum(const std::vector<Subspace<Scalar>>& parts) {
    Index ambient = 0, dim = 0;
    for (const auto& p : parts) {
        ambient += p.ambient_dim();
        dim += p.dim();
    }
    Mat<Scalar> b = Mat<Scalar>::Zero(ambient, dim);
    Index r = 0, c = 0;
    for (const auto& p : parts) {
        b.block(r, c, p.ambient_dim(), p.dim()) = p.basis();
        r += p.ambient_dim();
        c += p.dim();
    }
    return Subspace<Scalar>::span(b);
}

}  // namespace eqih
