#include "eqih/equivariant.hpp"

namespace eqih {

namespace {

Index eq1_ambient(const Model& m, int k) { return m.dim(k) + m.dim(k - 1); }

/// Matrix of (alpha, beta) -> first component of D(alpha, beta).
MatQ eq1_top_row(const Model& m, int k) {
    MatQ out(m.dim(k + 1), eq1_ambient(m, k));
    out << m.differential(k), Rational(beta_sign(k)) * m.euler(k - 1);
    return out;
}

MatQ eq1_differential(const Model& m, int k) {
    MatQ out = MatQ::Zero(eq1_ambient(m, k + 1), eq1_ambient(m, k));
    out.topRows(m.dim(k + 1)) = eq1_top_row(m, k);
    out.block(m.dim(k + 1), m.dim(k), m.dim(k), m.dim(k - 1)) = m.differential(k - 1);
    return out;
}

}  // namespace

MatQ eq1_twist(const Model& m, int k) {
    MatQ out = MatQ::Zero(eq1_ambient(m, k - 1), eq1_ambient(m, k));
    out.block(0, m.dim(k), m.dim(k - 1), m.dim(k - 1)) =
        Rational(beta_sign(k)) * MatQ::Identity(m.dim(k - 1), m.dim(k - 1));
    return out;
}

Complex build_eq1(const Model& m, const Perversity& p) {
    check_perversity(m, p);
    const Complex lower = build_omega(m, p - characteristic_perversity(m));
    std::vector<SubspaceQ> spaces;
    std::vector<MatQ> d;
    for (int k = 0; k <= m.top_degree + 1; ++k) {
        const SubspaceQ domain = direct_sum<Rational>({m.filtration(p, k), lower.space(k - 1)});
        spaces.push_back(preimage(eq1_top_row(m, k), domain, m.filtration(p, k + 1)));
        d.push_back(eq1_differential(m, k));
    }
    return Complex::plain(0, std::move(spaces), std::move(d));
}

Complex build_gysin_shifted(const Model& m, const Perversity& p) {
    const Complex g = build_gysin(m, p);
    std::vector<SubspaceQ> spaces;
    std::vector<MatQ> d;
    for (int k = 0; k <= m.top_degree + 1; ++k) {
        spaces.push_back(g.space(k - 1));
        d.push_back(m.differential(k - 1));
    }
    return Complex::plain(0, std::move(spaces), std::move(d));
}

const LambdaTensor::Block* LambdaTensor::find(int n, int j) const {
    if (n < 0 || n >= int(blocks.size())) return nullptr;
    for (const auto& b : blocks[std::size_t(n)])
        if (b.j == j) return &b;
    return nullptr;
}

VecQ LambdaTensor::embed(int k, int j, const VecQ& v) const {
    const int n = k + 2 * j;
    VecQ out = VecQ::Zero(complex->ambient_dim(n));
    const Block* b = find(n, j);
    if (!b) throw std::out_of_range("no u^" + std::to_string(j) + " block in degree " + std::to_string(n));
    out.segment(b->offset, b->size) = v;
    return out;
}

VecQ LambdaTensor::component(int n, int j, const VecQ& v) const {
    const Block* b = find(n, j);
    if (!b) return VecQ(0);
    return v.segment(b->offset, b->size);
}

LambdaTensor tensor_lambda_u(const Complex& c, int N, const std::function<MatQ(int)>& twist) {
    LambdaTensor t;
    t.N = N;
    std::vector<Index> ambient;
    for (int n = 0; n <= N + 1; ++n) {
        std::vector<LambdaTensor::Block> row;
        Index offset = 0;
        for (int j = 0; 2 * j <= n; ++j) {
            const int k = n - 2 * j;
            if (!c.in_range(k)) continue;
            row.push_back({j, k, offset, c.ambient_dim(k)});
            offset += c.ambient_dim(k);
        }
        t.blocks.push_back(std::move(row));
        ambient.push_back(offset);
    }
    std::vector<SubspaceQ> spaces, dens;
    std::vector<MatQ> d;
    for (int n = 0; n <= N + 1; ++n) {
        std::vector<SubspaceQ> sp, dn;
        for (const auto& b : t.blocks[std::size_t(n)]) {
            sp.push_back(c.space(b.k));
            dn.push_back(c.denominator(b.k));
        }
        spaces.push_back(direct_sum(sp));
        dens.push_back(direct_sum(dn));
        if (sp.empty()) {
            spaces.back() = SubspaceQ::zero(0);
            dens.back() = SubspaceQ::zero(0);
        }
        const Index rows = n + 1 <= N + 1 ? ambient[std::size_t(n + 1)] : 0;
        MatQ diff = MatQ::Zero(rows, ambient[std::size_t(n)]);
        if (n + 1 <= N + 1) {
            for (const auto& b : t.blocks[std::size_t(n)]) {
                if (const auto* same = t.find(n + 1, b.j))
                    diff.block(same->offset, b.offset, same->size, b.size) = c.differential(b.k);
                if (twist) {
                    if (const auto* next = t.find(n + 1, b.j + 1))
                        diff.block(next->offset, b.offset, next->size, b.size) = twist(b.k);
                }
            }
        }
        d.push_back(std::move(diff));
    }
    t.complex = std::make_shared<Complex>(0, std::move(spaces), std::move(dens), std::move(d));
    return t;
}

ChainMap tensor_map(const ChainMap& f, const LambdaTensor& source, const LambdaTensor& target) {
    if (f.shift != 0) throw std::invalid_argument("tensor_map: only degree-preserving maps");
    ChainMap out;
    out.source = source.complex;
    out.target = target.complex;
    for (int n = 0; n <= source.N + 1; ++n) {
        MatQ m = MatQ::Zero(target.complex->ambient_dim(n), source.complex->ambient_dim(n));
        for (const auto& b : source.blocks[std::size_t(n)]) {
            const auto* tb = target.find(n, b.j);
            if (!tb) continue;
            m.block(tb->offset, b.offset, tb->size, b.size) = f.map(b.k);
        }
        out.maps.push_back(std::move(m));
    }
    return out;
}

ChainMap u_action(const LambdaTensor& t) {
    ChainMap out;
    out.source = t.complex;
    out.target = t.complex;
    out.shift = 2;
    for (int n = 0; n <= t.N + 1; ++n) {
        MatQ m = MatQ::Zero(t.complex->ambient_dim(n + 2), t.complex->ambient_dim(n));
        for (const auto& b : t.blocks[std::size_t(n)]) {
            if (const auto* up = t.find(n + 2, b.j + 1)) m.block(up->offset, b.offset, up->size, b.size).setIdentity();
        }
        out.maps.push_back(std::move(m));
    }
    return out;
}

Cohomology product_cohomology(const LambdaTensor& t, const Cohomology& base) {
    Cohomology h(*t.complex);
    for (int n = 0; n <= t.N; ++n) {
        std::vector<VecQ> cols;
        for (const auto& b : t.blocks[std::size_t(n)]) {
            const MatQ reps = base.representatives(b.k);
            for (Index c = 0; c < reps.cols(); ++c) cols.push_back(t.embed(b.k, b.j, reps.col(c)));
        }
        MatQ reps(t.complex->ambient_dim(n), Index(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) reps.col(Index(c)) = cols[c];
        h = h.with_representatives(n, reps);
    }
    return h;
}

Eq1Data eq1_data(const Model& m, const PerverseData& pd) {
    Eq1Data out;
    auto eq = std::make_shared<Complex>(build_eq1(m, pd.p));
    auto gs = std::make_shared<Complex>(build_gysin_shifted(m, pd.p));
    try {
        eq->verify();
        gs->verify();
    } catch (const NotAComplex& e) {
        throw InternalInvariantViolation(std::string("pair complex: ") + e.what());
    }
    out.complex = eq;
    out.gysin_shifted = gs;
    out.h = Cohomology(*eq);
    Cohomology hs(*gs);
    for (int k = 1; k <= m.top_degree + 1; ++k) hs = hs.with_representatives(k, pd.hg.representatives(k - 1));
    out.h_gysin_shifted = hs;

    out.pi.source = pd.omega;
    out.pi.target = eq;
    out.oint.source = eq;
    out.oint.target = gs;
    for (int k = 0; k <= m.top_degree; ++k) {
        MatQ pi = MatQ::Zero(eq1_ambient(m, k), m.dim(k));
        pi.topRows(m.dim(k)).setIdentity();
        out.pi.maps.push_back(std::move(pi));
    }
    for (int k = 0; k <= m.top_degree + 1; ++k) {
        MatQ oi = MatQ::Zero(m.dim(k - 1), eq1_ambient(m, k));
        oi.rightCols(m.dim(k - 1)).setIdentity();
        out.oint.maps.push_back(std::move(oi));
    }
    return out;
}

SesLongExact gysin_les(const Model& m, const PerverseData& pd, const Eq1Data& eq) {
    verify_short_exact(eq.pi, eq.oint);
    auto les = les_from_ses(eq.pi, eq.oint, pd.ih, eq.h, eq.h_gysin_shifted, 0, m.top_degree + 1, true, "IH", "IH(X)",
                            "H(G[-1])");
    for (int k = 1; k <= m.top_degree + 1; ++k) {
        if (les.connecting[std::size_t(k)] != pd.eub[std::size_t(k - 1)])
            throw DecompositionMismatch(k, "Gysin connecting map differs from the Euler map");
    }
    return les;
}

std::vector<Index> EquivariantData::u_ranks() const {
    std::vector<Index> out;
    for (const auto& m : u_maps) out.push_back(rank(m));
    return out;
}

int default_truncation(const Model& m) { return m.top_degree + 6; }

EquivariantData build_equivariant(const Model& m, const PerverseData& pd, const Eq1Data& eq, int N) {
    if (N < 0) throw std::invalid_argument("negative truncation");
    EquivariantData out;
    out.p = pd.p;
    out.N = N;
    out.omega_u = tensor_lambda_u(*pd.omega, N, nullptr);
    out.eq_u = tensor_lambda_u(*eq.complex, N, [&](int k) { return eq1_twist(m, k); });
    out.gysin_u = tensor_lambda_u(*eq.gysin_shifted, N, nullptr);
    try {
        out.eq_u.complex->verify();
    } catch (const NotAComplex& e) {
        throw InternalInvariantViolation(std::string("equivariant complex: ") + e.what());
    }
    out.h = Cohomology(*out.eq_u.complex);
    out.h_omega = product_cohomology(out.omega_u, pd.ih);
    out.h_gysin = product_cohomology(out.gysin_u, eq.h_gysin_shifted);
    out.u = u_action(out.eq_u);
    try {
        out.u.verify();
    } catch (const NotAComplex& e) {
        throw InternalInvariantViolation(std::string("u-action: ") + e.what());
    }
    for (int n = 0; n + 2 <= N; ++n) out.u_maps.push_back(induced_map(out.u, out.h, out.h, n));
    out.pi = tensor_map(eq.pi, out.omega_u, out.eq_u);
    out.oint = tensor_map(eq.oint, out.eq_u, out.gysin_u);
    return out;
}

MatQ predicted_delta(const PerverseData& pd, const EquivariantData& eqd, int n) {
    // Coordinates follow product_cohomology: blocks in increasing j, each
    // block in the base representative order.
    const auto offsets = [](const LambdaTensor& t, int deg, const auto& dim_of) {
        std::map<int, std::pair<Index, Index>> out;
        Index off = 0;
        if (deg < 0 || deg >= int(t.blocks.size())) return out;
        for (const auto& b : t.blocks[std::size_t(deg)]) {
            const Index sz = dim_of(b.k);
            out[b.j] = {off, sz};
            off += sz;
        }
        return out;
    };
    const auto src = offsets(eqd.gysin_u, n, [&](int k) { return k >= 1 ? pd.hg.dim(k - 1) : Index(0); });
    const auto tgt = offsets(eqd.omega_u, n + 1, [&](int k) { return pd.ih.dim(k); });
    MatQ out = MatQ::Zero(eqd.h_omega.dim(n + 1), eqd.h_gysin.dim(n));
    for (const auto& [j, s] : src) {
        const int i = n - 2 * j - 1;
        if (s.second == 0 || i < 0) continue;
        if (auto it = tgt.find(j); it != tgt.end() && it->second.second > 0)
            out.block(it->second.first, s.first, it->second.second, s.second) = pd.eub[std::size_t(i)];
        if (auto it = tgt.find(j + 1); it != tgt.end() && it->second.second > 0)
            out.block(it->second.first, s.first, it->second.second, s.second) =
                Rational(parity_sign(i)) * pd.iota[std::size_t(i)];
    }
    return out;
}

EquivariantGysin equivariant_gysin_les(const PerverseData& pd, const EquivariantData& eqd) {
    verify_short_exact(eqd.pi, eqd.oint);
    EquivariantGysin out;
    out.les = les_from_ses(eqd.pi, eqd.oint, eqd.h_omega, eqd.h, eqd.h_gysin, 0, eqd.N, false, "IH(x)u", "IH_S1",
                           "H(G[-1])(x)u");
    for (int n = 0; n < eqd.N; ++n) {
        if (out.les.connecting[std::size_t(n)] != predicted_delta(pd, eqd, n)) {
            out.mismatch_degree = n;
            break;
        }
    }
    return out;
}

}  // namespace eqih
