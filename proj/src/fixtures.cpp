#include "eqih/fixtures.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace eqih {

namespace {

MatQ mat(Index rows, Index cols, std::initializer_list<long> entries) {
    MatQ out(rows, cols);
    auto it = entries.begin();
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) out(r, c) = Rational(*it++);
    return out;
}

VecQ vec(std::initializer_list<long> entries) {
    VecQ out(Index(entries.size()));
    Index i = 0;
    for (long e : entries) out(i++) = Rational(e);
    return out;
}

SubspaceQ span_of(Index ambient, std::initializer_list<VecQ> vectors) {
    MatQ g(ambient, Index(vectors.size()));
    Index c = 0;
    for (const auto& v : vectors) g.col(c++) = v;
    return SubspaceQ::span(g);
}

std::vector<MatQ> zero_maps(const Model& m, int shift) {
    std::vector<MatQ> out;
    for (int k = 0; k <= m.top_degree; ++k) out.push_back(MatQ::Zero(m.dim(k + shift), m.dim(k)));
    return out;
}

/// The sphere S^2 as base: 1 in degree 0, v in degree 2, d = 0, unit product.
Model sphere_base(const std::string& name) {
    Model m;
    m.name = name;
    m.top_degree = 2;
    m.dims = {1, 0, 1};
    m.d = zero_maps(m, 1);
    m.euler_op = zero_maps(m, 2);
    m.euler_cocycle = VecQ::Zero(1);
    ProductTable prod;
    prod.entries[{0, 0}] = {{vec({1})}};
    prod.entries[{0, 2}] = {{vec({1})}};
    prod.entries[{2, 0}] = {{vec({1})}};
    m.product = prod;
    return m;
}

/// Deterministic integer draws; the modulo mapping keeps streams identical
/// across standard library implementations.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}
    int between(int lo, int hi) { return lo + static_cast<int>(rng_() % std::uint64_t(hi - lo + 1)); }
    bool coin() { return between(0, 1) == 1; }

private:
    std::mt19937_64 rng_;
};

MatQ random_matrix(Draw& draw, Index rows, Index cols, int lo = -2, int hi = 2) {
    MatQ out(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) out(r, c) = Rational(draw.between(lo, hi));
    return out;
}

/// Unimodular integer matrix (unit lower times unit upper triangular, then a
/// row permutation) together with its inverse.
std::pair<MatQ, MatQ> random_invertible(Draw& draw, Index n) {
    MatQ lower = MatQ::Identity(n, n), upper = MatQ::Identity(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c) {
            if (r > c) lower(r, c) = Rational(draw.between(-1, 1));
            if (r < c) upper(r, c) = Rational(draw.between(-1, 1));
        }
    std::vector<Index> perm(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) perm[std::size_t(i)] = i;
    for (Index i = n - 1; i > 0; --i) std::swap(perm[std::size_t(i)], perm[std::size_t(draw.between(0, int(i)))]);
    MatQ p = MatQ::Zero(n, n);
    for (Index i = 0; i < n; ++i) p(i, perm[std::size_t(i)]) = 1;
    MatQ t = p * lower * upper;
    MatQ aug(n, 2 * n);
    aug << t, MatQ::Identity(n, n);
    auto e = rref(aug);
    return {t, e.reduced.rightCols(n)};
}

}  // namespace

Model make_hopf() {
    Model m = sphere_base("HOPF");
    m.euler_op[0] = mat(1, 1, {1});
    m.euler_cocycle = vec({1});
    m.perversities = {Perversity()};
    m.normal = true;
    m.free = true;
    return m;
}

Model make_rot() {
    Model m = sphere_base("ROT");
    m.perversities = {Perversity()};
    m.normal = true;
    m.free = true;
    return m;
}

Model make_cone2() {
    Model m = sphere_base("CONE2");
    m.euler_op[0] = mat(1, 1, {1});
    m.euler_cocycle = vec({1});
    m.strata = {{"apex", StratumKind::fixed_perverse}};
    const SubspaceQ none = SubspaceQ::zero(0);
    const SubspaceQ zero1 = SubspaceQ::zero(1), full1 = SubspaceQ::full(1);
    m.filtrations["apex"] = {
        {zero1, none, zero1},
        {full1, none, zero1},
        {full1, none, zero1},
        {full1, none, full1},
    };
    for (int v = 0; v <= 3; ++v) m.perversities.push_back(Perversity({{"apex", v}}));
    m.cone = ConeData{"apex", {1, 0, 1}, {{0, mat(1, 1, {1})}}};
    m.normal = true;
    return m;
}

Model make_noperv() {
    // Basis: 1 | w | v, z with dw = z and euler cocycle z.
    Model m;
    m.name = "NOPERV";
    m.top_degree = 2;
    m.dims = {1, 1, 2};
    m.d = zero_maps(m, 1);
    m.d[1] = mat(2, 1, {0, 1});
    m.euler_op = zero_maps(m, 2);
    m.euler_op[0] = mat(2, 1, {0, 1});
    m.euler_cocycle = vec({0, 1});
    m.strata = {{"s", StratumKind::fixed_nonperverse}};
    const SubspaceQ z1 = SubspaceQ::zero(1), f1 = SubspaceQ::full(1);
    const SubspaceQ z2 = SubspaceQ::zero(2), f2 = SubspaceQ::full(2);
    m.filtrations["s"] = {
        {z1, z1, z2},
        {f1, z1, z2},
        {f1, f1, span_of(2, {vec({0, 1})})},
        {f1, f1, f2},
    };
    ProductTable prod;
    prod.entries[{0, 0}] = {{vec({1})}};
    prod.entries[{0, 1}] = {{vec({1})}};
    prod.entries[{1, 0}] = {{vec({1})}};
    prod.entries[{1, 1}] = {{vec({0, 0})}};
    prod.entries[{0, 2}] = {{vec({1, 0}), vec({0, 1})}};
    prod.entries[{2, 0}] = {{vec({1, 0})}, {vec({0, 1})}};
    m.product = prod;
    for (int v = 0; v <= 2; ++v) m.perversities.push_back(Perversity({{"s", v}}));
    m.normal = true;
    return m;
}

Model make_random(std::uint64_t seed, int size) {
    if (size < 1 || size > 4) throw std::invalid_argument("random model size must be 1 .. 4");
    Draw draw(seed);
    Model m;
    m.name = "RANDOM:" + std::to_string(seed) + ":" + std::to_string(size);
    m.top_degree = draw.between(2, 3 + (size > 2 ? 1 : 0));
    const int top = m.top_degree;

    // Normal form: degree k splits as H (cohomology) + B (boundaries) + C,
    // with d the identity C^k -> B^{k+1}.
    std::vector<Index> h(std::size_t(top + 1)), b(std::size_t(top + 1), 0), c(std::size_t(top + 1), 0);
    for (int k = 0; k <= top; ++k) {
        h[std::size_t(k)] = draw.between(k == 0 ? 1 : 0, std::max(1, size - 1));
        if (k > 0) b[std::size_t(k)] = c[std::size_t(k - 1)];
        if (k < top) c[std::size_t(k)] = std::min<Index>(draw.between(0, 1), std::max<Index>(0, size - h[std::size_t(k)] - b[std::size_t(k)]));
        m.dims.push_back(h[std::size_t(k)] + b[std::size_t(k)] + c[std::size_t(k)]);
    }
    const auto hb = [&](int k) { return k >= 0 && k <= top ? h[std::size_t(k)] : Index(0); };
    const auto bb = [&](int k) { return k >= 0 && k <= top ? b[std::size_t(k)] : Index(0); };
    const auto cb = [&](int k) { return k >= 0 && k <= top ? c[std::size_t(k)] : Index(0); };

    std::vector<MatQ> d0, e0;
    for (int k = 0; k <= top; ++k) {
        MatQ d = MatQ::Zero(m.dim(k + 1), m.dim(k));
        if (k < top && cb(k) > 0) d.block(hb(k + 1), hb(k) + bb(k), cb(k), cb(k)).setIdentity();
        d0.push_back(d);
    }
    // E in normal form: HB = CH = CB = 0 and BB in degree k+1 equals CC in degree k.
    std::vector<MatQ> cc(std::size_t(top + 1));
    for (int k = 0; k <= top; ++k) {
        MatQ e = MatQ::Zero(m.dim(k + 2), m.dim(k));
        if (k + 2 <= top) {
            const Index h0 = hb(k), b0 = bb(k), c0 = cb(k);
            const Index h2 = hb(k + 2), b2 = bb(k + 2), c2 = cb(k + 2);
            e.block(0, 0, h2, h0) = random_matrix(draw, h2, h0);
            e.block(0, h0 + b0, h2, c0) = random_matrix(draw, h2, c0);
            e.block(h2, 0, b2, h0) = random_matrix(draw, b2, h0);
            e.block(h2, h0 + b0, b2, c0) = random_matrix(draw, b2, c0);
            cc[std::size_t(k)] = random_matrix(draw, c2, c0);
            e.block(h2 + b2, h0 + b0, c2, c0) = cc[std::size_t(k)];
            if (k >= 1 && b0 > 0 && b2 > 0) e.block(h2, h0, b2, b0) = cc[std::size_t(k - 1)];
        }
        e0.push_back(e);
    }
    // Conjugate everything by random unimodular changes of basis.
    std::vector<MatQ> t, tinv;
    for (int k = 0; k <= top; ++k) {
        auto [a, ai] = random_invertible(draw, m.dim(k));
        t.push_back(a);
        tinv.push_back(ai);
    }
    const auto T = [&](int k) { return k <= top ? t[std::size_t(k)] : MatQ(0, 0); };
    for (int k = 0; k <= top; ++k) {
        m.d.push_back(T(k + 1) * d0[std::size_t(k)] * tinv[std::size_t(k)]);
        m.euler_op.push_back(T(k + 2) * e0[std::size_t(k)] * tinv[std::size_t(k)]);
    }
    // Euler cocycle: a random cocycle of degree 2 (H and B parts).
    {
        VecQ eps = VecQ::Zero(m.dim(2));
        for (Index i = 0; i < hb(2) + bb(2); ++i) eps(i) = Rational(draw.between(-1, 1));
        m.euler_cocycle = t[2] * eps;
    }

    const int nstrata = draw.between(0, size >= 2 ? 2 : 1);
    const char* names[] = {"s1", "s2"};
    for (int s = 0; s < nstrata; ++s) {
        const int kind = draw.between(0, 2);
        Stratum st{names[s], kind == 0 ? StratumKind::mobile
                            : kind == 1 ? StratumKind::fixed_nonperverse
                                        : StratumKind::fixed_perverse};
        m.strata.push_back(st);
        const int ebar = kind;
        const int kmax = draw.between(std::max(1, ebar), 3);
        std::vector<std::vector<SubspaceQ>> chain(std::size_t(kmax + 2));
        for (int k = 0; k <= top; ++k) chain[0].push_back(SubspaceQ::zero(m.dim(k)));
        for (int level = 0; level <= kmax; ++level) {
            auto& cur = chain[std::size_t(level + 1)];
            for (int k = 0; k <= top; ++k) {
                const Index n = m.dim(k);
                if (level == kmax || k == 0) {
                    cur.push_back(SubspaceQ::full(n));
                    continue;
                }
                SubspaceQ f = sum(chain[std::size_t(level)][std::size_t(k)],
                                  SubspaceQ::span(random_matrix(draw, n, draw.between(0, int(n)), -1, 1)));
                if (k >= 2 && level - ebar >= 0)
                    f = sum(f, apply(m.euler_op[std::size_t(k - 2)], chain[std::size_t(level - ebar + 1)][std::size_t(k - 2)]));
                if (k == 2 && level >= ebar) f = sum(f, SubspaceQ::span(MatQ(m.euler_cocycle)));
                cur.push_back(f);
            }
        }
        m.filtrations[st.name] = std::move(chain);
    }
    if (nstrata > 0) {
        std::map<std::string, int> p;
        for (const auto& s : m.strata) p[s.name] = draw.between(0, m.kmax(s.name));
        m.perversities.emplace_back(std::move(p));
    } else {
        m.perversities.emplace_back();
    }
    m.free = nstrata == 0;
    return m;
}

Model make_fixture(const std::string& name) {
    if (name == "HOPF") return make_hopf();
    if (name == "ROT") return make_rot();
    if (name == "CONE2") return make_cone2();
    if (name == "NOPERV") return make_noperv();
    if (name.rfind("RANDOM", 0) == 0) {
        std::uint64_t seed = 1;
        int size = 2;
        std::stringstream ss(name.substr(6));
        char colon = 0;
        if (ss >> colon) {
            if (colon != ':' || !(ss >> seed)) throw std::invalid_argument("RANDOM fixture expects RANDOM:seed:size");
            if (ss >> colon) {
                if (colon != ':' || !(ss >> size)) throw std::invalid_argument("RANDOM fixture expects RANDOM:seed:size");
            }
            if (!ss.eof() && ss.peek() != EOF) throw std::invalid_argument("trailing text in fixture name");
        }
        return make_random(seed, size);
    }
    throw std::invalid_argument("unknown fixture '" + name + "'");
}

std::vector<std::string> fixture_names() { return {"HOPF", "ROT", "CONE2", "NOPERV"}; }

Model with_scaled_euler(const Model& m, const Rational& factor) {
    Model out = m;
    out.euler_cocycle = factor * m.euler_cocycle;
    for (auto& e : out.euler_op) e = factor * e;
    if (factor != 1) out.product.reset();
    return out;
}

Model transport(const Model& m, const std::vector<MatQ>& g, const std::string& name) {
    if (g.size() != std::size_t(m.top_degree + 1)) throw std::invalid_argument("transport: one matrix per degree");
    std::vector<MatQ> ginv;
    for (int k = 0; k <= m.top_degree; ++k) {
        const MatQ& a = g[std::size_t(k)];
        if (a.rows() != m.dim(k) || a.cols() != m.dim(k)) throw std::invalid_argument("transport: wrong shape");
        MatQ aug(m.dim(k), 2 * m.dim(k));
        aug << a, MatQ::Identity(m.dim(k), m.dim(k));
        auto e = rref(aug);
        if (e.rank() != m.dim(k) || (m.dim(k) > 0 && e.pivots.back() >= m.dim(k)))
            throw std::invalid_argument("transport: matrix not invertible in degree " + std::to_string(k));
        ginv.push_back(e.reduced.rightCols(m.dim(k)));
    }
    const auto G = [&](int k) { return k <= m.top_degree ? g[std::size_t(k)] : MatQ(0, 0); };
    Model out = m;
    out.name = name;
    for (int k = 0; k <= m.top_degree; ++k) {
        out.d[std::size_t(k)] = G(k + 1) * m.differential(k) * ginv[std::size_t(k)];
        out.euler_op[std::size_t(k)] = G(k + 2) * m.euler(k) * ginv[std::size_t(k)];
    }
    if (m.top_degree >= 2) out.euler_cocycle = g[2] * m.euler_cocycle;
    for (auto& [s, chain] : out.filtrations)
        for (auto& level : chain)
            for (int k = 0; k <= m.top_degree; ++k) level[std::size_t(k)] = apply(g[std::size_t(k)], level[std::size_t(k)]);
    out.product.reset();
    return out;
}

Model with_shifted_euler(const Model& m, const VecQ& shift) {
    if (shift.rows() != m.dim(2)) throw std::invalid_argument("with_shifted_euler: shift must live in degree 2");
    Model out = m;
    out.euler_cocycle = m.euler_cocycle + shift;
    out.product.reset();
    return out;
}

// ---------------------------------------------------------------------------
// Oracle. Plain row-vector Gaussian elimination, written separately from the
// library's echelon code on purpose.

namespace {

using Row = std::vector<Rational>;
using Rows = std::vector<Row>;

/// Reduces `a` in place to row echelon form; returns pivot columns.
std::vector<std::size_t> eliminate(Rows& a, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < a.size(); ++col) {
        std::size_t piv = r;
        while (piv < a.size() && a[piv][col] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[r]);
        const Rational lead = a[r][col];
        for (auto& x : a[r]) x /= lead;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][col] == 0) continue;
            const Rational f = a[i][col];
            for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

std::size_t oracle_rank(Rows a, std::size_t cols) { return eliminate(a, cols).size(); }

/// Null space of the row system `a` (each row has `cols` entries), as a list of vectors.
Rows null_space(Rows a, std::size_t cols) {
    const auto pivots = eliminate(a, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    Rows out;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Row v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
        out.push_back(std::move(v));
    }
    return out;
}

/// Linear functionals vanishing exactly on the span of `vectors` in Q^n.
Rows annihilator_rows(const Rows& vectors, std::size_t n) {
    if (vectors.empty()) {
        Rows id;
        for (std::size_t i = 0; i < n; ++i) {
            Row e(n, Rational(0));
            e[i] = 1;
            id.push_back(std::move(e));
        }
        return id;
    }
    return null_space(vectors, n);
}

Rows columns_of(const MatQ& m) {
    Rows out;
    for (Index c = 0; c < m.cols(); ++c) {
        Row v;
        for (Index r = 0; r < m.rows(); ++r) v.push_back(m(r, c));
        out.push_back(std::move(v));
    }
    return out;
}

Row apply_matrix(const MatQ& m, const Row& x, std::size_t offset) {
    Row out(std::size_t(m.rows()), Rational(0));
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c)
            if (m(r, c) != 0) out[std::size_t(r)] += m(r, c) * x[offset + std::size_t(c)];
    return out;
}

struct OracleDegree {
    std::size_t ambient = 0;
    /// (j, k, offset) per block; a block holds alpha in A^k then beta in A^{k-1}.
    std::vector<std::tuple<int, int, std::size_t>> blocks;
    Rows cochains;
};

}  // namespace

OracleResult oracle_cohomology(const Model& m, const Perversity& p, int N) {
    const int top = m.top_degree;
    const auto level_of = [&](const Stratum& s, int value) { return std::clamp(value, -1, m.kmax(s.name)); };
    const auto lower_value = [&](const Stratum& s) {
        const int x = s.kind == StratumKind::mobile ? 0 : 1;
        return std::max(p[s.name] - x, -1);
    };
    // Functionals cutting out F_p^k (or F_{p-xbar}^k when `lower`).
    const auto constraints = [&](int k, bool lower) {
        Rows out;
        if (k < 0 || k > top) return out;
        for (const auto& s : m.strata) {
            const int level = level_of(s, lower ? lower_value(s) : p[s.name]);
            const auto rows = annihilator_rows(columns_of(m.filtration(s.name, level, k).basis()), std::size_t(m.dim(k)));
            out.insert(out.end(), rows.begin(), rows.end());
        }
        return out;
    };

    std::vector<OracleDegree> deg(std::size_t(N + 3));
    for (int n = 0; n <= N + 2; ++n) {
        auto& od = deg[std::size_t(n)];
        for (int j = 0; 2 * j <= n; ++j) {
            const int k = n - 2 * j;
            if (k > top + 1) continue;
            od.blocks.emplace_back(j, k, od.ambient);
            od.ambient += std::size_t(m.dim(k) + m.dim(k - 1));
        }
        Rows sys;
        for (const auto& [j, k, off] : od.blocks) {
            const std::size_t na = std::size_t(m.dim(k)), nb = std::size_t(m.dim(k - 1));
            const auto pad = [&](const Row& local, std::size_t at) {
                Row r(od.ambient, Rational(0));
                for (std::size_t i = 0; i < local.size(); ++i) r[at + i] = local[i];
                return r;
            };
            for (const auto& f : constraints(k, false)) sys.push_back(pad(f, off));
            for (const auto& f : constraints(k - 1, true)) sys.push_back(pad(f, off + na));
            // d(beta) in F_{p-xbar}^k
            for (const auto& f : constraints(k, true)) {
                Row r(od.ambient, Rational(0));
                const MatQ d = m.differential(k - 1);
                for (Index c = 0; c < d.cols(); ++c)
                    for (Index i = 0; i < d.rows(); ++i) r[off + na + std::size_t(c)] += f[std::size_t(i)] * d(i, c);
                sys.push_back(std::move(r));
            }
            // d(alpha) + (-1)^(k-1) E(beta) in F_p^{k+1}
            const Rational sign = (k - 1) % 2 == 0 ? 1 : -1;
            for (const auto& f : constraints(k + 1, false)) {
                Row r(od.ambient, Rational(0));
                const MatQ d = m.differential(k);
                const MatQ e = m.euler(k - 1);
                for (Index c = 0; c < d.cols(); ++c)
                    for (Index i = 0; i < d.rows(); ++i) r[off + std::size_t(c)] += f[std::size_t(i)] * d(i, c);
                for (Index c = 0; c < e.cols(); ++c)
                    for (Index i = 0; i < e.rows(); ++i) r[off + na + std::size_t(c)] += sign * f[std::size_t(i)] * e(i, c);
                sys.push_back(std::move(r));
            }
            (void)nb;
            (void)j;
        }
        od.cochains = sys.empty() ? annihilator_rows({}, od.ambient) : null_space(sys, od.ambient);
    }

    // nabla applied to one cochain of total degree n.
    const auto nabla = [&](int n, const Row& x) {
        const auto& src = deg[std::size_t(n)];
        const auto& dst = deg[std::size_t(n + 1)];
        Row out(dst.ambient, Rational(0));
        for (const auto& [j, k, off] : src.blocks) {
            const std::size_t na = std::size_t(m.dim(k));
            const Row alpha_part = apply_matrix(m.differential(k), x, off);
            const Rational sign = (k - 1) % 2 == 0 ? 1 : -1;
            const Row e_part = apply_matrix(m.euler(k - 1), x, off + na);
            const Row beta_part = apply_matrix(m.differential(k - 1), x, off + na);
            for (const auto& [j2, k2, off2] : dst.blocks) {
                if (j2 == j && k2 == k + 1) {
                    for (std::size_t i = 0; i < alpha_part.size(); ++i) out[off2 + i] += alpha_part[i] + sign * e_part[i];
                    for (std::size_t i = 0; i < beta_part.size(); ++i) out[off2 + alpha_part.size() + i] += beta_part[i];
                }
                if (j2 == j + 1 && k2 == k - 1) {
                    for (std::size_t i = 0; i < std::size_t(m.dim(k - 1)); ++i) out[off2 + i] += sign * x[off + na + i];
                }
            }
        }
        return out;
    };
    const auto shift_u = [&](int n, const Row& x) {
        const auto& src = deg[std::size_t(n)];
        const auto& dst = deg[std::size_t(n + 2)];
        Row out(dst.ambient, Rational(0));
        for (const auto& [j, k, off] : src.blocks)
            for (const auto& [j2, k2, off2] : dst.blocks)
                if (j2 == j + 1 && k2 == k)
                    for (std::size_t i = 0; i < std::size_t(m.dim(k) + m.dim(k - 1)); ++i) out[off2 + i] = x[off + i];
        return out;
    };

    std::vector<std::size_t> rank_out(std::size_t(N + 2), 0);
    std::vector<Rows> images(std::size_t(N + 2));
    for (int n = 0; n <= N + 1; ++n) {
        Rows img;
        for (const auto& z : deg[std::size_t(n)].cochains) img.push_back(nabla(n, z));
        rank_out[std::size_t(n)] = oracle_rank(img, deg[std::size_t(n + 1)].ambient);
        images[std::size_t(n)] = std::move(img);
    }
    OracleResult out;
    for (int n = 0; n <= N; ++n) {
        const std::size_t c = deg[std::size_t(n)].cochains.size();
        const std::size_t in = n > 0 ? rank_out[std::size_t(n - 1)] : 0;
        out.dims.push_back(Index(c - rank_out[std::size_t(n)] - in));
    }
    for (int n = 0; n + 2 <= N; ++n) {
        // Cocycles of degree n: combinations of cochains killed by nabla.
        const auto& basis = deg[std::size_t(n)].cochains;
        Rows coeff_sys;  // columns = cochain coefficients; rows = coordinates of nabla
        const std::size_t amb1 = deg[std::size_t(n + 1)].ambient;
        for (std::size_t r = 0; r < amb1; ++r) {
            Row row;
            for (const auto& img : images[std::size_t(n)]) row.push_back(img[r]);
            coeff_sys.push_back(std::move(row));
        }
        const Rows kernel = coeff_sys.empty() ? annihilator_rows({}, basis.size()) : null_space(coeff_sys, basis.size());
        Rows shifted;
        for (const auto& kvec : kernel) {
            Row z(deg[std::size_t(n)].ambient, Rational(0));
            for (std::size_t i = 0; i < basis.size(); ++i)
                for (std::size_t a = 0; a < z.size(); ++a) z[a] += kvec[i] * basis[i][a];
            shifted.push_back(shift_u(n, z));
        }
        const Rows& bounds = images[std::size_t(n + 1)];
        Rows both = bounds;
        both.insert(both.end(), shifted.begin(), shifted.end());
        const std::size_t amb2 = deg[std::size_t(n + 2)].ambient;
        out.u_ranks.push_back(Index(oracle_rank(both, amb2) - oracle_rank(bounds, amb2)));
    }
    return out;
}

}  // namespace eqih
