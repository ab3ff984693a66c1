#include "eqih/localize.hpp"

namespace eqih {

LambdaUModule LambdaUModule::from(const EquivariantData& eqd) {
    LambdaUModule out;
    out.N = eqd.N;
    out.dims = eqd.dims();
    out.u_maps = eqd.u_maps;
    int n0 = eqd.N - 1;
    while (n0 - 1 >= 0) {
        const int n = n0 - 1;
        const MatQ& u = out.u_maps[std::size_t(n)];
        const bool iso = out.dims[std::size_t(n)] == out.dims[std::size_t(n + 2)] && rank(u) == out.dims[std::size_t(n)];
        if (!iso) break;
        n0 = n;
    }
    out.stable_from = n0;
    const int steps = eqd.N - 1 - n0;
    if (steps < kStableSteps)
        throw TruncationTooSmall(eqd.N, "u is an isomorphism on only " + std::to_string(steps) +
                                            " consecutive degrees below the truncation");
    return out;
}

LocalizedModule localize(const LambdaUModule& module) {
    const int N = module.N;
    const int even = N % 2 == 0 ? N : N - 1;
    const int odd = N % 2 == 0 ? N - 1 : N;
    return {module.dims[std::size_t(even)], module.dims[std::size_t(odd)]};
}

LocalizedModule localize(const Session& s, const Perversity& p, int N) {
    return localize(LambdaUModule::from(*s.equivariant(p, N)));
}

namespace {

/// Offsets of the degree-i blocks inside the parity-`par` sum of graded pieces.
std::vector<Index> parity_offsets(const std::vector<Index>& dims, int par, Index& total) {
    std::vector<Index> off(dims.size(), -1);
    total = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (int(i) % 2 != par) continue;
        off[i] = total;
        total += dims[i];
    }
    return off;
}

}  // namespace

LocalizedGysin localized_gysin(const Model& m, const PerverseData& pd, const EquivariantData& eqd) {
    LocalizedGysin out;
    const int top = m.top_degree;
    std::vector<Index> gd, id;
    for (int i = 0; i <= top; ++i) {
        gd.push_back(pd.hg.dim(i));
        id.push_back(pd.ih.dim(i));
    }
    for (int par = 0; par < 2; ++par) {
        Index ng = 0, ni = 0;
        const auto goff = parity_offsets(gd, par, ng);
        const auto ioff = parity_offsets(id, par, ni);
        out.gysin_dim[par] = ng;
        out.ih_dim[par] = ni;
        PolyMatrix delta(ni, ng);
        for (int i = par; i <= top; i += 2) {
            const Index g = gd[std::size_t(i)];
            if (g == 0) continue;
            const MatQ zero_i = MatQ::Zero(id[std::size_t(i)], g);
            delta.set_block(ioff[std::size_t(i)], goff[std::size_t(i)], zero_i,
                            Rational(parity_sign(i)) * pd.iota[std::size_t(i)]);
            if (i + 2 <= top && id[std::size_t(i + 2)] > 0) {
                const MatQ& e = pd.eub[std::size_t(i)];
                for (Index r = 0; r < e.rows(); ++r)
                    for (Index c = 0; c < e.cols(); ++c)
                        delta(ioff[std::size_t(i + 2)] + r, goff[std::size_t(i)] + c) = Poly(e(r, c));
            }
        }
        out.delta_rank[par] = rank_over_fractions(delta);
        out.delta[par] = std::move(delta);
    }
    // IL^even = coker(delta_even) + ker(delta_odd); IL^odd symmetrically.
    out.from_delta.even = (out.ih_dim[0] - out.delta_rank[0]) + (out.gysin_dim[1] - out.delta_rank[1]);
    out.from_delta.odd = (out.ih_dim[1] - out.delta_rank[1]) + (out.gysin_dim[0] - out.delta_rank[0]);

    const int s = eqd.N - 2;
    if (s < top + 1) throw TruncationTooSmall(eqd.N, "no stable window above the top degree");
    const auto les = equivariant_gysin_les(pd, eqd).les;
    const std::size_t first = std::size_t(3 * s);
    for (std::size_t k = first; k < first + 8; ++k) out.stable.nodes.push_back(les.sequence.nodes[k]);
    for (std::size_t k = first; k < first + 7; ++k) out.stable.maps.push_back(les.sequence.maps[k]);
    out.stable.closed_start = false;
    out.stable.closed_end = false;
    out.exactness = check_exact(out.stable);
    if (!out.exactness.exact()) {
        const auto& node = out.exactness.nodes[std::size_t(out.exactness.first_failure())];
        throw NotExact(node.degree, "localized Gysin sequence fails at " + node.label);
    }
    // Stable connecting maps C^s -> A^{s+1} and C^{s+1} -> A^{s+2}; C^n holds G in parity n - 1.
    for (int n = s; n <= s + 1; ++n) {
        const int par = (n + 1) % 2;
        const MatQ& conn = les.connecting[std::size_t(n)];
        if (conn.rows() != out.ih_dim[par] || conn.cols() != out.gysin_dim[par] || rank(conn) != out.delta_rank[par])
            out.ranks_agree = false;
    }
    if (!out.ranks_agree)
        throw NotExact(s, "stable connecting maps and the fraction-field ranks of delta disagree");
    return out;
}

LocalizedModule cone_prediction(const Model& m, const Perversity& p) {
    if (!m.cone) throw NotAConeModel("model " + m.name + " carries no cone link data");
    const ConeData& cone = *m.cone;
    const int apex = p[cone.apex];
    const auto link_dim = [&](int k) -> Index {
        return k >= 0 && k < int(cone.link_dims.size()) ? cone.link_dims[std::size_t(k)] : 0;
    };
    Index parts[2] = {0, 0};
    if (apex >= 0) parts[apex % 2] += link_dim(apex);
    if (apex - 1 >= 0) {
        auto it = cone.link_eub.find(apex - 1);
        // IH^{m-1} / ker(eub) has the dimension of the image of eub.
        if (it != cone.link_eub.end()) parts[(apex - 1) % 2] += rank(it->second);
    }
    return {parts[0], parts[1]};
}

ConeCheck cone_formula_check(const Session& s, const Perversity& p) {
    ConeCheck out;
    out.predicted = cone_prediction(s.model(), p);
    out.apex_perversity = p[s.model().cone->apex];
    out.computed = localize(s, p);
    return out;
}

}  // namespace eqih
