#include "eqih/spectral.hpp"

#include <algorithm>

namespace eqih {

SubspaceQ FilteredComplex::level(int i, int n) const {
    if (!complex->in_range(n)) return SubspaceQ::zero(0);
    if (i <= 0) return complex->space(n);
    if (i > top_filtration) return SubspaceQ::zero(complex->ambient_dim(n));
    return levels[std::size_t(i)][std::size_t(n - complex->lo())];
}

void FilteredComplex::verify() const {
    for (int n = complex->lo(); n <= complex->hi(); ++n) {
        for (int i = 0; i <= top_filtration; ++i) {
            if (!level(i, n).contains(level(i + 1, n)))
                throw PropertyViolation("filtration_decreasing", 0, i, n - i, "F^{i+1} not inside F^i");
            if (n < complex->hi() && !level(i, n + 1).contains(apply(complex->differential(n), level(i, n))))
                throw PropertyViolation("filtration_stable", 0, i, n - i, "differential leaves F^i");
        }
        if (!level(0, n).contains(complex->space(n)))
            throw PropertyViolation("filtration_exhaustive", 0, 0, n, "F^0 is not everything");
    }
}

FilteredComplex base_degree_filtration(const EquivariantData& eqd) {
    FilteredComplex fc;
    const auto& t = eqd.eq_u;
    const auto& c = *t.complex;
    fc.complex = t.complex;
    fc.valid_degree = eqd.N;
    int top = 0;
    for (const auto& row : t.blocks)
        for (const auto& b : row) top = std::max(top, b.k);
    fc.top_filtration = top;
    // C_{>=i}: the coordinates of blocks with pair degree >= i, cut down to the space.
    std::vector<std::vector<SubspaceQ>> at_least(std::size_t(top + 1));
    for (int i = 0; i <= top; ++i) {
        for (int n = c.lo(); n <= c.hi(); ++n) {
            std::vector<Index> idx;
            for (const auto& b : t.blocks[std::size_t(n)])
                if (b.k >= i)
                    for (Index r = 0; r < b.size; ++r) idx.push_back(b.offset + r);
            MatQ coords = MatQ::Zero(c.ambient_dim(n), Index(idx.size()));
            for (std::size_t r = 0; r < idx.size(); ++r) coords(idx[r], Index(r)) = 1;
            at_least[std::size_t(i)].push_back(intersect(c.space(n), SubspaceQ::span(coords)));
        }
    }
    fc.levels.resize(std::size_t(top + 1));
    for (int i = 0; i <= top; ++i) {
        for (int n = c.lo(); n <= c.hi(); ++n) {
            const SubspaceQ& src = at_least[std::size_t(i)][std::size_t(n)];
            const SubspaceQ tgt = n < c.hi() ? at_least[std::size_t(i)][std::size_t(n + 1)] : SubspaceQ::zero(0);
            fc.levels[std::size_t(i)].push_back(preimage(c.differential(n), src, tgt));
        }
    }
    return fc;
}

Index SpectralPage::dim(int i, int j) const {
    const auto* c = cell(i, j);
    return c ? c->dim() : 0;
}

const SpectralCell* SpectralPage::cell(int i, int j) const {
    auto it = cells.find({i, j});
    return it == cells.end() ? nullptr : &it->second;
}

SpectralSequence::SpectralSequence(FilteredComplex fc, int r_max) : fc_(std::move(fc)) {
    if (r_max < 0) throw std::invalid_argument("negative page bound");
    for (int r = 0; r <= r_max; ++r) pages_.push_back(build(r));
    const int stable = fc_.top_filtration + 2;
    infinity_ = stable <= r_max ? pages_[std::size_t(stable)] : build(stable);
}

// Z_r^i(n) only depends on r through F^{i+r}, which is constant once i + r
// leaves [0, top + 1]; likewise B_r^i(n) through F^{i-r}. Keys are clamped.
const SubspaceQ& SpectralSequence::level(int i, int n) {
    i = std::clamp(i, 0, fc_.top_filtration + 1);
    auto it = level_cache_.find({i, n});
    if (it != level_cache_.end()) return it->second;
    return level_cache_.emplace(std::make_pair(i, n), fc_.level(i, n)).first->second;
}

const SubspaceQ& SpectralSequence::cycles(int r, int i, int n) {
    const int top = fc_.top_filtration;
    i = std::clamp(i, 0, top + 1);
    r = std::clamp(r, -i, top + 1 - i);
    auto key = std::make_tuple(r, i, n);
    auto it = z_cache_.find(key);
    if (it != z_cache_.end()) return it->second;
    const SubspaceQ& domain = level(i, n);
    auto img = image_cache_.find({i, n});
    if (img == image_cache_.end())
        img = image_cache_.emplace(std::make_pair(i, n), fc_.complex->differential(n) * domain.basis()).first;
    auto ann = annihilator_cache_.find({i + r, n + 1});
    if (ann == annihilator_cache_.end())
        ann = annihilator_cache_.emplace(std::make_pair(i + r, n + 1), level(i + r, n + 1).annihilator()).first;
    SubspaceQ z = domain;
    if (domain.dim() > 0 && ann->second.rows() > 0)
        z = SubspaceQ::span(domain.basis() * kernel(MatQ(ann->second * img->second)).basis());
    return z_cache_.emplace(key, std::move(z)).first->second;
}

const SubspaceQ& SpectralSequence::boundaries(int r, int i, int n) {
    const int top = fc_.top_filtration;
    i = std::clamp(i, 0, top + 1);
    r = std::clamp(r, i - top - 1, i);
    auto key = std::make_tuple(r, i, n);
    auto it = b_cache_.find(key);
    if (it != b_cache_.end()) return it->second;
    const Complex& c = *fc_.complex;
    SubspaceQ b = n - 1 < c.lo() ? SubspaceQ::zero(c.ambient_dim(n))
                                 : intersect(level(i, n), apply(c.differential(n - 1), level(i - r, n - 1)));
    return b_cache_.emplace(key, std::move(b)).first->second;
}

SpectralPage SpectralSequence::build(int r) {
    const Complex& c = *fc_.complex;
    const auto Z = [&](int rr, int i, int n) -> const SubspaceQ& { return cycles(rr, i, n); };
    const auto B = [&](int rr, int i, int n) -> const SubspaceQ& { return boundaries(rr, i, n); };
    SpectralPage page;
    page.r = r;
    const int top = fc_.top_filtration;
    for (int n = std::max(0, c.lo()); n <= fc_.valid_degree; ++n) {
        for (int i = 0; i <= top; ++i) {
            const SubspaceQ num = Z(r, i, n);
            const SubspaceQ den = sum(Z(r - 1, i + 1, n), B(r - 1, i, n));
            page.cells.emplace(std::make_pair(i, n - i), SpectralCell{i, n - i, quotient(num, den)});
        }
    }
    for (const auto& [key, cell] : page.cells) {
        const int n = cell.i + cell.j;
        if (n + 1 > fc_.valid_degree) continue;
        const MatQ image = c.differential(n) * cell.q.representatives;
        const auto* target = page.cell(cell.i + r, cell.j - r + 1);
        if (!target) {
            page.d[key] = MatQ::Zero(0, cell.dim());
            continue;
        }
        page.d[key] = target->q.projection * image;
    }
    return page;
}

MatQ SpectralSequence::classes(int r, int i, int j, const MatQ& vectors) const {
    const SpectralCell* cell = (r > r_max() ? infinity_ : page(r)).cell(i, j);
    if (!cell) return MatQ(0, vectors.cols());
    if (!cell->q.numerator.contains(vectors))
        throw PropertyViolation("cycle_membership", r, i, j, "vector outside Z_r");
    return cell->q.projection * vectors;
}

void SpectralSequence::check_generic(const Cohomology& h) const {
    for (const auto& page : pages_) {
        const int r = page.r;
        for (const auto& [key, dmat] : page.d) {
            const auto [i, j] = key;
            auto next = page.d.find({i + r, j - r + 1});
            if (next != page.d.end() && next->second.cols() == dmat.rows() && !is_zero(next->second * dmat))
                throw PropertyViolation("d_squared_zero", r, i, j, "d_r o d_r != 0");
        }
        if (r + 1 >= int(pages_.size())) continue;
        const SpectralPage& after = pages_[std::size_t(r + 1)];
        for (const auto& [key, cell] : page.cells) {
            const auto [i, j] = key;
            auto out = page.d.find(key);
            if (out == page.d.end()) continue;
            auto in = page.d.find({i - r, j + r - 1});
            const Index rank_in = in == page.d.end() ? 0 : rank(in->second);
            const Index homology = cell.dim() - rank(out->second) - rank_in;
            if (homology != after.dim(i, j))
                throw PropertyViolation("page_homology", r, i, j,
                                        "H(E_r) has dim " + std::to_string(homology) + ", E_{r+1} has " +
                                            std::to_string(after.dim(i, j)));
        }
    }
    for (int n = 0; n <= fc_.valid_degree; ++n) {
        Index total = 0;
        for (int i = 0; i <= fc_.top_filtration; ++i) total += infinity_.dim(i, n - i);
        if (total != h.dim(n))
            throw PropertyViolation("convergence", -1, 0, n,
                                    "sum of E_inf is " + std::to_string(total) + ", cohomology has " + std::to_string(h.dim(n)));
    }
}

int identification_sign(int i, int j) {
    const int exponent = i * j + j * (j + 3) / 2;
    return exponent % 2 == 0 ? 1 : -1;
}

namespace {

MatQ identify_vectors(const PerverseData& pd, const EquivariantData& eqd, int r, int i, int j, const MatQ& vectors) {
    const int n = i + 2 * j;
    const Cohomology& target = j == 0 ? pd.ih : pd.hk;
    const Index na = pd.omega->ambient_dim(i);
    MatQ out(target.dim(i), vectors.cols());
    for (Index c = 0; c < vectors.cols(); ++c) {
        const VecQ block = eqd.eq_u.component(n, j, vectors.col(c));
        if (block.rows() == 0) {
            out.col(c).setZero();
            continue;
        }
        const VecQ alpha = block.head(na);
        if (!is_zero(block.tail(block.rows() - na)))
            throw PropertyViolation("e2_identification", r, i, 2 * j, "leading block has a nonzero beta part");
        if (!target.is_cocycle(i, alpha))
            throw PropertyViolation("e2_identification", r, i, 2 * j, "leading alpha is not a cocycle");
        out.col(c) = Rational(identification_sign(i, j)) * target.class_of(i, alpha);
    }
    return out;
}

MatQ zero_if_empty(const std::vector<MatQ>& v, int k, Index rows, Index cols) {
    if (k < 0 || k >= int(v.size())) return MatQ::Zero(rows, cols);
    return v[std::size_t(k)];
}

}  // namespace

MatQ identification(const PerverseData& pd, const EquivariantData& eqd, const SpectralSequence& ss, int r, int i, int j) {
    const SpectralCell* cell = ss.page(r).cell(i, 2 * j);
    if (!cell) return MatQ(0, 0);
    return identify_vectors(pd, eqd, r, i, j, cell->q.representatives);
}

SpectralReport check_basic_spectral_sequence(const Model&, const PerverseData& pd, const EquivariantData& eqd,
                                             const SpectralSequence& ss, bool d3) {
    SpectralReport report;
    report.r_max = ss.r_max();
    ss.check_generic(eqd.h);
    report.passed.push_back("page_homology");
    report.passed.push_back("convergence");

    for (int r = 1; r <= ss.r_max(); ++r)
        for (const auto& [key, cell] : ss.page(r).cells)
            if (cell.j % 2 != 0 && cell.dim() != 0)
                throw PropertyViolation("odd_rows_vanish", r, cell.i, cell.j, "dimension " + std::to_string(cell.dim()));
    report.passed.push_back("odd_rows_vanish");

    for (int s = 1; 2 * s + 1 <= ss.r_max(); ++s) {
        const auto& even = ss.page(2 * s);
        const auto& odd = ss.page(2 * s + 1);
        for (const auto& [key, dmat] : even.d)
            if (!is_zero(dmat)) throw PropertyViolation("even_pages_equal_odd", 2 * s, key.first, key.second, "d_{2s} != 0");
        for (const auto& [key, cell] : even.cells)
            if (cell.dim() != odd.dim(key.first, key.second))
                throw PropertyViolation("even_pages_equal_odd", 2 * s, key.first, key.second, "E_{2s} and E_{2s+1} differ");
    }
    report.passed.push_back("even_pages_equal_odd");

    if (ss.r_max() >= 2) {
        for (const auto& [key, cell] : ss.page(2).cells) {
            if (cell.j % 2 != 0 || cell.j < 0) continue;
            const int i = cell.i, j = cell.j / 2;
            const MatQ psi = identify_vectors(pd, eqd, 2, i, j, cell.q.representatives);
            const MatQ killed = identify_vectors(pd, eqd, 2, i, j, cell.q.denominator.basis());
            if (!is_zero(killed))
                throw PropertyViolation("e2_identification", 2, i, cell.j, "identification does not vanish on the denominator");
            if (!inverse(psi))
                throw PropertyViolation("e2_identification", 2, i, cell.j, "identification is not invertible");
        }
        report.passed.push_back("e2_identification");

        for (int r = 3; r <= ss.r_max(); ++r) {
            for (int i = 0; i <= ss.filtered().top_filtration && i <= ss.filtered().valid_degree; ++i) {
                const SpectralCell* e2 = ss.page(2).cell(i, 0);
                const MatQ image = ss.classes(r, i, 0, e2->q.representatives);
                if (rank(image) != ss.page(r).dim(i, 0))
                    throw PropertyViolation("edge_map_surjective", r, i, 0, "E_2 -> E_r not onto");
            }
        }
        report.passed.push_back("edge_map_surjective");
    }

    if (d3 && ss.r_max() >= 3) {
        const auto& page = ss.page(3);
        for (const auto& [key, dmat] : page.d) {
            const auto [i, row] = key;
            if (row < 2 || row % 2 != 0) continue;
            const int j = row / 2;
            const Index nk = pd.hk.dim(i), ng = pd.hg.dim(i + 1), nih = pd.ih.dim(i + 3);
            MatQ composite = zero_if_empty(pd.eub, i + 1, nih, ng) * zero_if_empty(pd.cogysin_connecting, i, ng, nk);
            if (j >= 2) composite = zero_if_empty(pd.project_classes, i + 3, pd.hk.dim(i + 3), nih) * composite;
            const MatQ psi_s = identification(pd, eqd, ss, 3, i, j);
            const MatQ psi_t = page.cell(i + 3, row - 2) ? identification(pd, eqd, ss, 3, i + 3, j - 1)
                                                         : MatQ(composite.rows(), 0);
            const auto psi_s_inv = inverse(psi_s);
            if (!psi_s_inv || psi_t.cols() != dmat.rows())
                throw PropertyViolation("d3_composite", 3, i, row, "E_3 identification unavailable");
            D3Cell cell{i, j, psi_t * dmat * *psi_s_inv, composite, true};
            cell.equal = cell.engine == cell.composite;
            if (!is_zero(cell.composite)) report.d3_nonzero = true;
            report.d3.push_back(cell);
            if (!cell.equal) throw PropertyViolation("d3_composite", 3, i, row, "third differential differs from the Euler composite");
        }
        report.passed.push_back("d3_composite");
    }
    return report;
}

void check_odd_differentials(const SpectralSequence& ss) {
    for (int s = 1; 2 * s + 1 <= ss.r_max(); ++s) {
        for (const auto& [key, dmat] : ss.page(2 * s + 1).d) {
            if (key.second % 2 == 0 && key.second != 2 * s && !is_zero(dmat))
                throw PropertyViolation("odd_differentials", 2 * s + 1, key.first, key.second, "d_{2s+1} nonzero off row 2s");
        }
    }
}

bool skjelbred_eligible(const Model& m, const PerverseData& zero, const PerverseData& minus_x) {
    for (int k = 0; k <= m.top_degree; ++k) {
        if (zero.gysin->space(k) != minus_x.omega->space(k)) return false;
        if (minus_x.gysin->space(k) != minus_x.omega->space(k)) return false;
    }
    return true;
}

SkjelbredData skjelbred(const Model& m, const PerverseData& zero, const PerverseData& minus_x, const EquivariantData& eqd) {
    if (zero.p != zero_perversity(m)) throw IdentificationFails("the Skjelbred sequence needs perversity 0");
    if (!skjelbred_eligible(m, zero, minus_x))
        throw IdentificationFails("G_0 and G_{-xbar} must both equal Omega_{-xbar}");
    const int N = eqd.N;
    const auto& hk = zero.hk;
    const auto cdim = [&](int n) {
        Index total = 0;
        for (int s = 1; n - 2 * s >= 0; ++s) total += hk.dim(n - 2 * s);
        return total;
    };

    SkjelbredData out;
    auto& seq = out.sequence;
    seq.closed_start = true;
    seq.closed_end = false;
    for (int n = 0; n <= N; ++n) {
        seq.nodes.push_back({"IH_0^" + std::to_string(n), n, zero.ih.dim(n)});
        seq.nodes.push_back({"IH_S1^" + std::to_string(n), n, eqd.h.dim(n)});
        seq.nodes.push_back({"H(K_0)u^" + std::to_string(n), n, cdim(n)});

        // alpha: [a] -> [(a, 0) u^0]
        const MatQ reps = zero.ih.representatives(n);
        MatQ alpha(eqd.h.dim(n), zero.ih.dim(n));
        for (Index c = 0; c < reps.cols(); ++c) {
            VecQ pair = VecQ::Zero(m.dim(n) + m.dim(n - 1));
            pair.head(m.dim(n)) = reps.col(c);
            alpha.col(c) = eqd.h.class_of(n, eqd.eq_u.embed(n, 0, pair));
        }
        seq.maps.push_back(alpha);

        // delta: [sum (a_k, b_k) u^k] -> sum_{k >= 1} [a_k] u^k
        const MatQ hreps = eqd.h.representatives(n);
        MatQ delta(cdim(n), eqd.h.dim(n));
        for (Index c = 0; c < hreps.cols(); ++c) {
            Index row = 0;
            for (int s = 1; n - 2 * s >= 0; ++s) {
                const int i = n - 2 * s;
                const Index len = hk.dim(i);
                const VecQ block = eqd.eq_u.component(n, s, hreps.col(c));
                if (len > 0) {
                    const VecQ a = block.head(m.dim(i));
                    if (!hk.is_cocycle(i, a)) throw IdentificationFails("u^k component is not a K_0 cocycle");
                    delta.block(row, c, len, 1) = hk.class_of(i, a);
                }
                row += len;
            }
        }
        seq.maps.push_back(delta);

        if (n == N) break;
        // beta: [w] u^s -> (-1)^s iota eub^s boundary [w]
        MatQ beta(zero.ih.dim(n + 1), cdim(n));
        Index col = 0;
        for (int s = 1; n - 2 * s >= 0; ++s) {
            const int i = n - 2 * s;
            const Index len = hk.dim(i);
            if (len == 0) continue;
            int deg = i + 1;
            MatQ x = MatQ::Zero(zero.ih.dim(n + 1), len);
            if (n + 1 <= m.top_degree) {
                MatQ y = minus_x.ih.classes_of(deg, zero.hg.representatives(deg)) * zero.cogysin_connecting[std::size_t(i)];
                for (int t = 0; t < s; ++t, deg += 2)
                    y = minus_x.eub[std::size_t(deg)] * minus_x.hg.classes_of(deg, minus_x.ih.representatives(deg)) * y;
                x = zero.ih.classes_of(deg, minus_x.ih.representatives(deg)) * y;
            }
            beta.block(0, col, beta.rows(), len) = Rational(s % 2 == 0 ? 1 : -1) * x;
            col += len;
        }
        seq.maps.push_back(beta);
    }
    out.exactness = check_exact(seq);
    return out;
}

}  // namespace eqih
