#include "eqih/homalg.hpp"

#include <algorithm>

namespace eqih {

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Solve [f * space.basis | den.basis] x = target and return space.basis * x_head.
std::optional<VecQ> pull_back(const MatQ& f, const SubspaceQ& space, const SubspaceQ& den, const VecQ& target) {
    MatQ system(f.rows(), space.dim() + den.dim());
    system << f * space.basis(), den.basis();
    auto x = solve_preimage(system, target);
    if (!x) return std::nullopt;
    return VecQ(space.basis() * x->head(space.dim()));
}

}  // namespace

Complex::Complex(int lo, std::vector<SubspaceQ> spaces, std::vector<SubspaceQ> denominators, std::vector<MatQ> d)
    : lo_(lo), spaces_(std::move(spaces)), denominators_(std::move(denominators)), d_(std::move(d)) {
    if (d_.size() != spaces_.size()) throw std::invalid_argument("complex: one differential per degree required");
    if (denominators_.empty()) {
        for (const auto& s : spaces_) denominators_.push_back(SubspaceQ::zero(s.ambient_dim()));
    }
    if (denominators_.size() != spaces_.size()) throw std::invalid_argument("complex: denominator count");
    for (std::size_t i = 0; i < spaces_.size(); ++i) {
        const Index next = i + 1 < spaces_.size() ? spaces_[i + 1].ambient_dim() : 0;
        if (d_[i].cols() != spaces_[i].ambient_dim() || d_[i].rows() != next)
            throw std::invalid_argument("complex: differential shape at degree " + std::to_string(lo_ + int(i)));
        if (denominators_[i].ambient_dim() != spaces_[i].ambient_dim())
            throw AmbientMismatch(denominators_[i].ambient_dim(), spaces_[i].ambient_dim());
    }
}

Index Complex::ambient_dim(int k) const { return in_range(k) ? spaces_[std::size_t(k - lo_)].ambient_dim() : 0; }

Index Complex::dim(int k) const {
    return in_range(k) ? spaces_[std::size_t(k - lo_)].dim() - denominators_[std::size_t(k - lo_)].dim() : 0;
}

SubspaceQ Complex::space(int k) const { return in_range(k) ? spaces_[std::size_t(k - lo_)] : SubspaceQ::zero(0); }

SubspaceQ Complex::denominator(int k) const {
    return in_range(k) ? denominators_[std::size_t(k - lo_)] : SubspaceQ::zero(0);
}

MatQ Complex::differential(int k) const {
    if (in_range(k)) return d_[std::size_t(k - lo_)];
    return MatQ(ambient_dim(k + 1), 0);
}

void Complex::verify() const {
    for (int k = lo(); k <= hi(); ++k) {
        const auto sp = space(k);
        const auto den = denominator(k);
        if (!sp.contains(den)) throw NotAComplex(k, "denominator not inside the cochain space");
        if (k == hi()) continue;
        const MatQ d = differential(k);
        if (!space(k + 1).contains(apply(d, sp))) throw NotAComplex(k, "d does not preserve the cochain spaces");
        if (!denominator(k + 1).contains(apply(d, den))) throw NotAComplex(k, "d does not preserve the denominators");
        if (k + 1 < hi()) {
            const MatQ dd = differential(k + 1) * d;
            if (!denominator(k + 2).contains(apply(dd, sp))) throw NotAComplex(k, "d o d != 0");
        }
    }
}

Cohomology::Cohomology(const Complex& c) : lo_(c.lo()) {
    for (int k = c.lo(); k <= c.hi(); ++k) {
        const SubspaceQ sp = c.space(k);
        const SubspaceQ cycles = k < c.hi() ? preimage(c.differential(k), sp, c.denominator(k + 1)) : sp;
        SubspaceQ bounds = c.denominator(k);
        if (k > c.lo()) bounds = sum(bounds, apply(c.differential(k - 1), c.space(k - 1)));
        auto q = quotient(cycles, bounds);
        ambient_.push_back(sp.ambient_dim());
        degrees_.push_back(Degree{std::move(q), cycles.annihilator()});
    }
}

const Cohomology::Degree* Cohomology::at(int k) const {
    if (k < lo() || k > hi()) return nullptr;
    return &degrees_[std::size_t(k - lo_)];
}

Index Cohomology::dim(int k) const {
    const auto* d = at(k);
    return d ? d->quotient.dim() : 0;
}

std::vector<Index> Cohomology::dims(int from, int to) const {
    std::vector<Index> out;
    for (int k = from; k <= to; ++k) out.push_back(dim(k));
    return out;
}

const SubspaceQ& Cohomology::cycles(int k) const {
    const auto* d = at(k);
    if (!d) throw std::out_of_range("cohomology degree out of range");
    return d->quotient.numerator;
}

const SubspaceQ& Cohomology::boundaries(int k) const {
    const auto* d = at(k);
    if (!d) throw std::out_of_range("cohomology degree out of range");
    return d->quotient.denominator;
}

MatQ Cohomology::representatives(int k) const {
    const auto* d = at(k);
    return d ? d->quotient.representatives : MatQ(0, 0);
}

bool Cohomology::is_cocycle(int k, const VecQ& v) const {
    const auto* d = at(k);
    if (!d) return is_zero(v);
    if (v.rows() != d->quotient.numerator.ambient_dim()) return false;
    return is_zero(d->cycle_annihilator * v);
}

VecQ Cohomology::class_of(int k, const VecQ& cocycle) const {
    const auto* d = at(k);
    if (!d) return VecQ(0);
    if (!is_cocycle(k, cocycle)) throw std::invalid_argument("class_of: vector is not a cocycle in degree " + std::to_string(k));
    return d->quotient.projection * cocycle;
}

MatQ Cohomology::classes_of(int k, const MatQ& cocycles) const {
    MatQ out(dim(k), cocycles.cols());
    for (Index j = 0; j < cocycles.cols(); ++j) out.col(j) = class_of(k, cocycles.col(j));
    return out;
}

VecQ Cohomology::lift(int k, const VecQ& coordinates) const {
    const auto* d = at(k);
    if (!d) return VecQ(0);
    return d->quotient.representatives * coordinates;
}

Cohomology Cohomology::with_representatives(int k, const MatQ& reps) const {
    Cohomology out = *this;
    auto* d = const_cast<Degree*>(out.at(k));
    if (!d) throw std::out_of_range("with_representatives: degree out of range");
    d->quotient = quotient_with_representatives(d->quotient.numerator, d->quotient.denominator, reps);
    return out;
}

MatQ ChainMap::map(int k) const {
    if (source->in_range(k)) return maps[std::size_t(k - source->lo())];
    return MatQ(target->ambient_dim(k + shift), source->ambient_dim(k));
}

void ChainMap::verify() const {
    if (shift % 2 != 0) throw std::invalid_argument("chain map: odd shifts are not supported");
    if (maps.size() != std::size_t(source->hi() - source->lo() + 1))
        throw std::invalid_argument("chain map: one matrix per source degree required");
    for (int k = source->lo(); k <= source->hi(); ++k) {
        const MatQ f = map(k);
        if (f.rows() != target->ambient_dim(k + shift) || f.cols() != source->ambient_dim(k))
            throw NotAComplex(k, "chain map matrix has the wrong shape");
        if (!target->space(k + shift).contains(apply(f, source->space(k))))
            throw NotAComplex(k, "chain map does not preserve cochains");
        if (!target->denominator(k + shift).contains(apply(f, source->denominator(k))))
            throw NotAComplex(k, "chain map does not preserve denominators");
        const MatQ comm = target->differential(k + shift) * f - map(k + 1) * source->differential(k);
        if (!target->denominator(k + shift + 1).contains(apply(comm, source->space(k))))
            throw NotAComplex(k, "chain map does not commute with the differentials");
    }
}

MatQ induced_map(const ChainMap& f, const Cohomology& hs, const Cohomology& ht, int k) {
    const MatQ reps = hs.representatives(k);
    if (reps.cols() == 0) return MatQ(ht.dim(k + f.shift), 0);
    return ht.classes_of(k + f.shift, f.map(k) * reps);
}

bool ExactnessReport::exact() const { return first_failure() < 0; }

int ExactnessReport::first_failure() const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].checked && !nodes[i].exact) return int(i);
    return -1;
}

ExactnessReport check_exact(const LongExactSequence& seq) {
    ExactnessReport report;
    const std::size_t n = seq.nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        ExactnessNode node;
        node.label = seq.nodes[i].label;
        node.degree = seq.nodes[i].degree;
        node.dim = seq.nodes[i].dim;
        const bool has_in = i > 0 || seq.closed_start;
        const bool has_out = i + 1 < n || seq.closed_end;
        node.checked = has_in && has_out;
        const MatQ in = i > 0 ? seq.maps[i - 1] : MatQ(node.dim, 0);
        const MatQ out = i + 1 < n ? seq.maps[i] : MatQ(0, node.dim);
        if (in.rows() != node.dim || out.cols() != node.dim)
            throw std::invalid_argument("long exact sequence: map shape mismatch at node " + node.label);
        node.rank_in = rank(in);
        node.rank_out = rank(out);
        node.composite_zero = is_zero(out * in);
        node.exact = node.composite_zero && node.rank_in + node.rank_out == node.dim;
        report.nodes.push_back(node);
    }
    return report;
}

void verify_short_exact(const ChainMap& i, const ChainMap& s) {
    i.verify();
    s.verify();
    if (i.shift != 0 || s.shift != 0) throw std::invalid_argument("short exact sequence maps must have degree 0");
    const Complex& a = *i.source;
    const Complex& b = *i.target;
    const Complex& c = *s.target;
    const int lo = std::min({a.lo(), b.lo(), c.lo()});
    const int hi = std::max({a.hi(), b.hi(), c.hi()});
    for (int k = lo; k <= hi; ++k) {
        if (preimage(i.map(k), a.space(k), b.denominator(k)) != a.denominator(k)) throw NotExact(k, "i not injective");
        if (sum(apply(s.map(k), b.space(k)), c.denominator(k)) != c.space(k)) throw NotExact(k, "s not surjective");
        if (preimage(s.map(k), b.space(k), c.denominator(k)) != sum(apply(i.map(k), a.space(k)), b.denominator(k)))
            throw NotExact(k, "image of i differs from kernel of s");
    }
}

MatQ connecting_map(const ChainMap& i, const ChainMap& s, const Cohomology& ha, const Cohomology& hc, int k,
                    std::uint64_t perturb) {
    const Complex& a = *i.source;
    const Complex& b = *i.target;
    const Complex& c = *s.target;
    const MatQ reps = hc.representatives(k);
    MatQ out = MatQ::Zero(ha.dim(k + 1), reps.cols());
    if (reps.cols() == 0 || out.rows() == 0) return out;

    SubspaceQ ambiguity = SubspaceQ::zero(b.ambient_dim(k));
    if (perturb != 0) ambiguity = preimage(s.map(k), b.space(k), c.denominator(k));
    std::uint64_t state = perturb;

    for (Index col = 0; col < reps.cols(); ++col) {
        auto y = pull_back(s.map(k), b.space(k), c.denominator(k), reps.col(col));
        if (!y) throw std::logic_error("connecting map: cocycle has no lift");
        for (Index t = 0; t < ambiguity.dim(); ++t)
            *y += Rational(static_cast<long>(splitmix(state) % 7) - 3) * ambiguity.basis().col(t);
        const VecQ z = b.differential(k) * *y;
        auto x = pull_back(i.map(k + 1), a.space(k + 1), b.denominator(k + 1), z);
        if (!x) throw std::logic_error("connecting map: boundary does not come from A");
        out.col(col) = ha.class_of(k + 1, *x);
    }
    return out;
}

SesLongExact les_from_ses(const ChainMap& i, const ChainMap& s, const Cohomology& ha, const Cohomology& hb,
                          const Cohomology& hc, int from, int to, bool closed_end, const std::string& a_name,
                          const std::string& b_name, const std::string& c_name) {
    SesLongExact out;
    auto& seq = out.sequence;
    seq.closed_start = true;
    seq.closed_end = closed_end;
    for (int k = from; k <= to; ++k) {
        seq.nodes.push_back({a_name + "^" + std::to_string(k), k, ha.dim(k)});
        seq.nodes.push_back({b_name + "^" + std::to_string(k), k, hb.dim(k)});
        seq.nodes.push_back({c_name + "^" + std::to_string(k), k, hc.dim(k)});
        seq.maps.push_back(induced_map(i, ha, hb, k));
        seq.maps.push_back(induced_map(s, hb, hc, k));
        MatQ delta = connecting_map(i, s, ha, hc, k);
        out.connecting.push_back(delta);
        if (k < to) seq.maps.push_back(std::move(delta));
    }
    if (closed_end && !is_zero(out.connecting.back()))
        throw std::logic_error("les_from_ses: closed end requested but the last connecting map is nonzero");
    return out;
}

SesLongExact les_from_ses(const ChainMap& i, const ChainMap& s) {
    verify_short_exact(i, s);
    const Cohomology ha(*i.source), hb(*i.target), hc(*s.target);
    const int lo = std::min({i.source->lo(), i.target->lo(), s.target->lo()});
    const int hi = std::max({i.source->hi(), i.target->hi(), s.target->hi()});
    return les_from_ses(i, s, ha, hb, hc, lo, hi, true);
}

}  // namespace eqih
