#include "eqih/perverse.hpp"

namespace eqih {

namespace {

std::uint64_t mix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

VecQ random_combination(const MatQ& basis, std::uint64_t& state) {
    VecQ out = VecQ::Zero(basis.rows());
    for (Index c = 0; c < basis.cols(); ++c) out += Rational(static_cast<long>(mix(state) % 5) - 2) * basis.col(c);
    return out;
}

std::vector<MatQ> model_differentials(const Model& m) {
    std::vector<MatQ> d;
    for (int k = 0; k <= m.top_degree; ++k) d.push_back(m.differential(k));
    return d;
}

std::vector<SubspaceQ> omega_spaces(const Model& m, const Perversity& p) {
    std::vector<SubspaceQ> out;
    for (int k = 0; k <= m.top_degree; ++k)
        out.push_back(preimage(m.differential(k), m.filtration(p, k), m.filtration(p, k + 1)));
    return out;
}

std::vector<SubspaceQ> gysin_spaces(const Model& m, const Perversity& p) {
    const auto lower = omega_spaces(m, p - characteristic_perversity(m));
    std::vector<SubspaceQ> out;
    for (int k = 0; k <= m.top_degree; ++k) {
        const SubspaceQ reach = sum(m.filtration(p, k + 2), apply(m.differential(k + 1), m.filtration(p, k + 1)));
        out.push_back(preimage(m.euler(k), lower[std::size_t(k)], reach));
    }
    return out;
}

}  // namespace

Complex build_omega(const Model& m, const Perversity& p) {
    check_perversity(m, p);
    return Complex::plain(0, omega_spaces(m, p), model_differentials(m));
}

Complex build_gysin(const Model& m, const Perversity& p) {
    check_perversity(m, p);
    return Complex::plain(0, gysin_spaces(m, p), model_differentials(m));
}

Complex build_cogysin(const Model& m, const Perversity& p) {
    check_perversity(m, p);
    auto omega = omega_spaces(m, p);
    auto gysin = gysin_spaces(m, p);
    for (int k = 0; k <= m.top_degree; ++k)
        if (!omega[std::size_t(k)].contains(gysin[std::size_t(k)]))
            throw InternalInvariantViolation("G_p is not inside Omega_p in degree " + std::to_string(k));
    return Complex(0, std::move(omega), std::move(gysin), model_differentials(m));
}

ChainMap inclusion(const Model& m, const Perversity& p, const Perversity& q) {
    if (!leq(p, q)) throw std::invalid_argument("inclusion needs " + p.str() + " <= " + q.str());
    ChainMap f;
    f.source = std::make_shared<Complex>(build_omega(m, p));
    f.target = std::make_shared<Complex>(build_omega(m, q));
    for (int k = 0; k <= m.top_degree; ++k) f.maps.push_back(MatQ::Identity(m.dim(k), m.dim(k)));
    return f;
}

std::optional<VecQ> gysin_witness(const Model& m, const Perversity& p, int k, const VecQ& beta, std::uint64_t perturb) {
    const SubspaceQ fa = m.filtration(p, k + 1);
    const SubspaceQ fb = m.filtration(p, k + 2);
    const VecQ rhs = Rational(-parity_sign(k)) * (m.euler(k) * beta);
    MatQ system(m.dim(k + 2), fa.dim() + fb.dim());
    system << m.differential(k + 1) * fa.basis(), -fb.basis();
    auto x = solve_preimage(system, rhs);
    if (!x) return std::nullopt;
    VecQ alpha = fa.basis() * x->head(fa.dim());
    if (perturb != 0) {
        std::uint64_t state = perturb;
        const SubspaceQ ambiguity = preimage(m.differential(k + 1), fa, fb);
        alpha += random_combination(ambiguity.basis(), state);
    }
    return alpha;
}

MatQ euler_map(const Model& m, const PerverseData& data, int i, std::uint64_t perturb) {
    const MatQ reps = data.hg.representatives(i);
    MatQ out = MatQ::Zero(data.ih.dim(i + 2), reps.cols());
    if (out.rows() == 0) return out;
    std::uint64_t state = perturb;
    for (Index c = 0; c < reps.cols(); ++c) {
        VecQ beta = reps.col(c);
        if (perturb != 0 && i > 0) beta += m.differential(i - 1) * random_combination(data.gysin->space(i - 1).basis(), state);
        auto alpha = gysin_witness(m, data.p, i, beta, perturb == 0 ? 0 : mix(state));
        if (!alpha) throw WitnessNotFound(i);
        const VecQ f = m.differential(i + 1) * *alpha + Rational(parity_sign(i)) * (m.euler(i) * beta);
        if (!data.ih.is_cocycle(i + 2, f))
            throw InternalInvariantViolation("Gysin witness does not produce an Omega_p cocycle in degree " + std::to_string(i + 2));
        out.col(c) = data.ih.class_of(i + 2, f);
    }
    return out;
}

std::optional<MatQ> euler_map_closed_form(const Model& m, const PerverseData& data, int i) {
    const MatQ reps = data.hg.representatives(i);
    MatQ out = MatQ::Zero(data.ih.dim(i + 2), reps.cols());
    if (out.rows() == 0) return out;
    const SubspaceQ f = m.filtration(data.p, i + 2);
    for (Index c = 0; c < reps.cols(); ++c) {
        const VecQ e = m.euler(i) * reps.col(c);
        if (!f.contains(e)) return std::nullopt;
        out.col(c) = Rational(parity_sign(i)) * data.ih.class_of(i + 2, e);
    }
    return out;
}

PerverseData perverse_data(const Model& m, const Perversity& p) {
    PerverseData data;
    data.p = p;
    auto omega = std::make_shared<Complex>(build_omega(m, p));
    auto gysin = std::make_shared<Complex>(build_gysin(m, p));
    auto cogysin = std::make_shared<Complex>(build_cogysin(m, p));
    try {
        omega->verify();
        gysin->verify();
        cogysin->verify();
    } catch (const NotAComplex& e) {
        throw InternalInvariantViolation(std::string("perverse complex: ") + e.what());
    }
    data.omega = omega;
    data.gysin = gysin;
    data.cogysin = cogysin;
    data.ih = Cohomology(*omega);
    data.hg = Cohomology(*gysin);
    data.hk = Cohomology(*cogysin);

    const int top = m.top_degree;
    data.include_gysin.source = gysin;
    data.include_gysin.target = omega;
    data.project.source = omega;
    data.project.target = cogysin;
    for (int k = 0; k <= top; ++k) {
        data.include_gysin.maps.push_back(MatQ::Identity(m.dim(k), m.dim(k)));
        data.project.maps.push_back(MatQ::Identity(m.dim(k), m.dim(k)));
    }
    for (int i = 0; i <= top; ++i) {
        data.eub.push_back(euler_map(m, data, i));
        data.iota.push_back(induced_map(data.include_gysin, data.hg, data.ih, i));
        data.cogysin_connecting.push_back(connecting_map(data.include_gysin, data.project, data.hg, data.hk, i));
        data.project_classes.push_back(induced_map(data.project, data.ih, data.hk, i));
    }
    return data;
}

SesLongExact cogysin_les(const PerverseData& data, int top) {
    verify_short_exact(data.include_gysin, data.project);
    return les_from_ses(data.include_gysin, data.project, data.hg, data.ih, data.hk, 0, top, true, "H(G)", "IH", "H(K)");
}

}  // namespace eqih
