#include "eqih/classify.hpp"

#include <set>

namespace eqih {

ModelIso ModelIso::identity(const Model& m) {
    ModelIso iso;
    for (int k = 0; k <= m.top_degree; ++k) iso.f.push_back(MatQ::Identity(m.dim(k), m.dim(k)));
    for (const auto& s : m.strata) iso.strata[s.name] = s.name;
    return iso;
}

void validate_iso(const ModelIso& iso, const Model& m1, const Model& m2) {
    if (m1.top_degree != m2.top_degree) throw InvalidIso("models have different top degrees");
    if (iso.f.size() != std::size_t(m1.top_degree + 1)) throw InvalidIso("need one matrix per degree");
    const auto f = [&](int k) { return k >= 0 && k <= m1.top_degree ? iso.f[std::size_t(k)] : MatQ(0, 0); };
    for (int k = 0; k <= m1.top_degree; ++k) {
        const MatQ& fk = iso.f[std::size_t(k)];
        if (fk.rows() != m1.dim(k) || fk.cols() != m2.dim(k))
            throw InvalidIso("degree " + std::to_string(k) + ": matrix has the wrong shape");
        if (!inverse(fk)) throw InvalidIso("degree " + std::to_string(k) + ": not invertible");
        if (k < m1.top_degree && f(k + 1) * m2.differential(k) != m1.differential(k) * fk)
            throw InvalidIso("degree " + std::to_string(k) + ": does not commute with d");
    }
    std::set<std::string> targets;
    for (const auto& s2 : m2.strata) {
        auto it = iso.strata.find(s2.name);
        if (it == iso.strata.end()) throw InvalidIso("stratum '" + s2.name + "' has no partner");
        const std::string& s1 = it->second;
        m1.stratum(s1);
        if (!targets.insert(s1).second) throw InvalidIso("stratum '" + s1 + "' is hit twice");
        const int top_level = std::max(m1.kmax(s1), m2.kmax(s2.name));
        for (int level = -1; level <= top_level; ++level)
            for (int k = 0; k <= m1.top_degree; ++k)
                if (apply(iso.f[std::size_t(k)], m2.filtration(s2.name, level, k)) != m1.filtration(s1, level, k))
                    throw InvalidIso("filtration of '" + s2.name + "' at level " + std::to_string(level) +
                                     ", degree " + std::to_string(k) + " is not carried onto '" + s1 + "'");
    }
    if (iso.strata.size() != m2.strata.size() || targets.size() != m1.strata.size())
        throw InvalidIso("stratum correspondence is not a bijection");
}

bool is_optimal(const ModelIso& iso, const Model& m1, const Model& m2) {
    validate_iso(iso, m1, m2);
    for (const auto& [s2, s1] : iso.strata)
        if (m2.stratum(s2).kind != m1.stratum(s1).kind) return false;
    return true;
}

Relatedness f_related(const ModelIso& iso, const Model& m1, const Model& m2) {
    if (!is_optimal(iso, m1, m2)) throw PreconditionFailed("isomorphism does not preserve stratum kinds");
    Relatedness out;
    if (m1.top_degree < 2) {
        out.related = true;
        out.discrepancy = VecQ(0);
        out.witness = VecQ::Zero(m1.dim(1));
        return out;
    }
    out.discrepancy = iso.f[2] * m2.euler_cocycle - m1.euler_cocycle;
    const Complex omega = build_omega(m1, euler_perversity(m1));
    const MatQ basis = omega.space(1).basis();
    const auto x = solve_preimage(m1.differential(1) * basis, out.discrepancy);
    if (x) {
        out.related = true;
        out.witness = basis * *x;
    }
    return out;
}

Perversity transport_perversity(const ModelIso& iso, const Perversity& p1) {
    std::map<std::string, int> values;
    for (const auto& [s2, s1] : iso.strata) values[s2] = p1[s1];
    return Perversity(values);
}

ConsequenceReport consequence_check(const ModelIso& iso, const Session& s1, const Session& s2) {
    if (!f_related(iso, s1.model(), s2.model()).related)
        throw PreconditionFailed("Euler classes are not related by the isomorphism");
    ConsequenceReport report;
    for (const auto& p : working_lattice(s1.model())) {
        ConsequenceRow row;
        row.p = p;
        const Perversity q = transport_perversity(iso, p);
        const auto e1 = s1.equivariant(p);
        const auto e2 = s2.equivariant(q, e1->N);
        row.dims1 = e1->dims();
        row.dims2 = e2->dims();
        row.u_ranks1 = e1->u_ranks();
        row.u_ranks2 = e2->u_ranks();
        row.il1 = localize(LambdaUModule::from(*e1));
        row.il2 = localize(LambdaUModule::from(*e2));
        const std::string where = " at perversity '" + p.str() + "'";
        if (row.dims1 != row.dims2) throw TheoremViolation("equivariant dimensions differ" + where);
        if (row.u_ranks1 != row.u_ranks2) throw TheoremViolation("u-action ranks differ" + where);
        if (!(row.il1 == row.il2)) throw TheoremViolation("localized ranks differ" + where);
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace eqih
