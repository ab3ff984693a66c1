#include "eqih/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace eqih {

std::string to_string(StratumKind kind) {
    switch (kind) {
        case StratumKind::mobile: return "mobile";
        case StratumKind::fixed_nonperverse: return "fixed_nonperverse";
        case StratumKind::fixed_perverse: return "fixed_perverse";
    }
    return "mobile";
}

StratumKind parse_stratum_kind(const std::string& text) {
    if (text == "mobile") return StratumKind::mobile;
    if (text == "fixed_nonperverse") return StratumKind::fixed_nonperverse;
    if (text == "fixed_perverse") return StratumKind::fixed_perverse;
    throw std::invalid_argument("unknown stratum kind '" + text + "'");
}

int Perversity::operator[](const std::string& stratum) const {
    auto it = values_.find(stratum);
    if (it == values_.end()) throw UnknownStratum(stratum);
    return it->second;
}

std::string Perversity::str() const {
    std::string out;
    for (const auto& [name, v] : values_) {
        if (!out.empty()) out += ',';
        out += name + '=' + std::to_string(v);
    }
    return out;
}

Perversity parse_perversity(const std::string& text) {
    std::map<std::string, int> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
            throw std::invalid_argument("perversity entry '" + item + "' is not stratum=int");
        const std::string name = item.substr(0, eq);
        int v = 0;
        try {
            std::size_t used = 0;
            v = std::stoi(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::invalid_argument("perversity value in '" + item + "' is not an integer");
        }
        if (!values.emplace(name, v).second) throw std::invalid_argument("stratum '" + name + "' assigned twice");
    }
    return Perversity(std::move(values));
}

namespace {

template <typename Op>
Perversity pointwise(const Perversity& p, const Perversity& q, Op op) {
    if (p.values().size() != q.values().size()) throw StrataMismatch("perversities over different strata");
    std::map<std::string, int> out;
    for (const auto& [name, v] : p.values()) {
        auto it = q.values().find(name);
        if (it == q.values().end()) throw StrataMismatch("perversities over different strata");
        out[name] = op(v, it->second);
    }
    return Perversity(std::move(out));
}

std::vector<std::string> vector_strings(const VecQ& v) {
    std::vector<std::string> out;
    for (Index i = 0; i < v.rows(); ++i) out.push_back(to_string(v(i)));
    return out;
}

int euler_value(StratumKind kind) {
    switch (kind) {
        case StratumKind::mobile: return 0;
        case StratumKind::fixed_nonperverse: return 1;
        case StratumKind::fixed_perverse: return 2;
    }
    return 0;
}

}  // namespace

Perversity operator+(const Perversity& p, const Perversity& q) {
    return pointwise(p, q, [](int a, int b) { return a + b; });
}

Perversity operator-(const Perversity& p, const Perversity& q) {
    return pointwise(p, q, [](int a, int b) { return std::max(a - b, -1); });
}

bool leq(const Perversity& p, const Perversity& q) {
    bool ok = true;
    pointwise(p, q, [&](int a, int b) {
        ok = ok && a <= b;
        return 0;
    });
    return ok;
}

VecQ ProductTable::multiply(int a, const VecQ& x, int b, const VecQ& y, Index target_dim) const {
    VecQ out = VecQ::Zero(target_dim);
    auto it = entries.find({a, b});
    if (it == entries.end() || target_dim == 0) return out;
    const auto& table = it->second;
    for (Index r = 0; r < x.rows(); ++r) {
        if (x(r) == 0) continue;
        for (Index s = 0; s < y.rows(); ++s) {
            if (y(s) == 0) continue;
            out += x(r) * y(s) * table[std::size_t(r)][std::size_t(s)];
        }
    }
    return out;
}

MatQ Model::differential(int k) const {
    if (k >= 0 && k <= top_degree) return d[std::size_t(k)];
    return MatQ::Zero(dim(k + 1), dim(k));
}

MatQ Model::euler(int k) const {
    if (k >= 0 && k <= top_degree && std::size_t(k) < euler_op.size()) return euler_op[std::size_t(k)];
    return MatQ::Zero(dim(k + 2), dim(k));
}

const Stratum& Model::stratum(const std::string& name) const {
    for (const auto& s : strata)
        if (s.name == name) return s;
    throw UnknownStratum(name);
}

int Model::kmax(const std::string& s) const {
    auto it = filtrations.find(s);
    if (it == filtrations.end()) throw UnknownStratum(s);
    return static_cast<int>(it->second.size()) - 2;
}

SubspaceQ Model::filtration(const std::string& s, int level, int k) const {
    if (k < 0 || k > top_degree) return SubspaceQ::zero(0);
    auto it = filtrations.find(s);
    if (it == filtrations.end()) throw UnknownStratum(s);
    const int top = static_cast<int>(it->second.size()) - 2;
    level = std::clamp(level, -1, top);
    return it->second[std::size_t(level + 1)][std::size_t(k)];
}

SubspaceQ Model::filtration(const Perversity& p, int k) const {
    if (k < 0 || k > top_degree) return SubspaceQ::zero(0);
    SubspaceQ out = SubspaceQ::full(dim(k));
    for (const auto& s : strata) out = intersect(out, filtration(s.name, p[s.name], k));
    return out;
}

void Model::check_shapes() const {
    auto fail = [&](const std::string& what) { throw std::invalid_argument("model '" + name + "': " + what); };
    if (top_degree < 0) fail("negative top degree");
    if (dims.size() != std::size_t(top_degree + 1)) fail("dims must have top_degree + 1 entries");
    if (d.size() != dims.size()) fail("one differential per degree required");
    for (int k = 0; k <= top_degree; ++k) {
        if (d[std::size_t(k)].rows() != dim(k + 1) || d[std::size_t(k)].cols() != dim(k))
            fail("differential in degree " + std::to_string(k) + " has the wrong shape");
    }
    if (euler_op.size() > dims.size()) fail("too many Euler operator matrices");
    for (std::size_t k = 0; k < euler_op.size(); ++k) {
        if (euler_op[k].rows() != dim(int(k) + 2) || euler_op[k].cols() != dim(int(k)))
            fail("Euler operator in degree " + std::to_string(k) + " has the wrong shape");
    }
    if (euler_cocycle.rows() != dim(2)) fail("Euler cocycle must live in degree 2");
    std::set<std::string> names;
    for (const auto& s : strata) {
        if (s.name.empty()) fail("empty stratum name");
        if (!names.insert(s.name).second) fail("duplicate stratum '" + s.name + "'");
        auto it = filtrations.find(s.name);
        if (it == filtrations.end()) fail("stratum '" + s.name + "' has no filtration");
        if (it->second.size() < 2) fail("stratum '" + s.name + "' needs at least levels -1 and 0");
        for (const auto& level : it->second) {
            if (level.size() != dims.size()) fail("filtration of '" + s.name + "' must list every degree");
            for (int k = 0; k <= top_degree; ++k)
                if (level[std::size_t(k)].ambient_dim() != dim(k))
                    fail("filtration of '" + s.name + "' has a wrong ambient in degree " + std::to_string(k));
        }
    }
    for (const auto& [s, levels] : filtrations)
        if (!names.count(s)) fail("filtration for unknown stratum '" + s + "'");
    if (product) {
        for (const auto& [deg, table] : product->entries) {
            const auto [a, b] = deg;
            if (a < 0 || b < 0 || a > top_degree || b > top_degree) fail("product degrees out of range");
            if (table.size() != std::size_t(dim(a))) fail("product table rows mismatch");
            for (const auto& row : table) {
                if (row.size() != std::size_t(dim(b))) fail("product table columns mismatch");
                for (const auto& v : row)
                    if (v.rows() != dim(a + b)) fail("product value has the wrong length");
            }
        }
    }
    if (cone) {
        if (!names.count(cone->apex)) fail("cone apex '" + cone->apex + "' is not a stratum");
        const auto ldim = [&](int k) {
            return k >= 0 && std::size_t(k) < cone->link_dims.size() ? cone->link_dims[std::size_t(k)] : Index(0);
        };
        for (const auto& [k, e] : cone->link_eub)
            if (e.rows() != ldim(k + 2) || e.cols() != ldim(k)) fail("cone link Euler map has the wrong shape");
    }
}

Perversity constant_perversity(const Model& m, int value) {
    std::map<std::string, int> v;
    for (const auto& s : m.strata) v[s.name] = value;
    return Perversity(std::move(v));
}

Perversity zero_perversity(const Model& m) { return constant_perversity(m, 0); }

Perversity characteristic_perversity(const Model& m) {
    std::map<std::string, int> v;
    for (const auto& s : m.strata) v[s.name] = s.kind == StratumKind::mobile ? 0 : 1;
    return Perversity(std::move(v));
}

Perversity euler_perversity(const Model& m) {
    std::map<std::string, int> v;
    for (const auto& s : m.strata) v[s.name] = euler_value(s.kind);
    return Perversity(std::move(v));
}

bool has_perverse_strata(const Model& m) { return euler_perversity(m) != characteristic_perversity(m); }

void check_perversity(const Model& m, const Perversity& p) {
    for (const auto& [name, v] : p.values()) m.stratum(name);
    if (p.values().size() != m.strata.size())
        throw StrataMismatch("perversity '" + p.str() + "' does not assign every stratum");
}

std::vector<Perversity> working_lattice(const Model& m) {
    std::set<Perversity> out;
    for (const auto& p : m.perversities) {
        check_perversity(m, p);
        out.insert(p);
    }
    const Perversity xbar = characteristic_perversity(m);
    const Perversity zero = zero_perversity(m);
    out.insert(zero);
    out.insert(zero - xbar);
    out.insert(euler_perversity(m));
    std::vector<Perversity> todo(out.begin(), out.end());
    while (!todo.empty()) {
        Perversity p = todo.back();
        todo.pop_back();
        Perversity q = p - xbar;
        if (out.insert(q).second) todo.push_back(q);
    }
    return {out.begin(), out.end()};
}

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

class Checker {
public:
    explicit Checker(ValidationReport& r, std::string name) : report_(r), index_(r.checks.size()) {
        report_.checks.push_back(ValidationCheck{std::move(name), true, "", {}});
    }
    void fail(const std::string& detail, const VecQ& v = VecQ(0)) {
        auto& c = check();
        if (!c.passed) return;
        c.passed = false;
        c.detail = detail;
        c.counterexample = vector_strings(v);
    }
    bool failed() const { return !report_.checks[index_].passed; }
    void note(const std::string& detail) {
        if (!failed()) check().detail = detail;
    }

private:
    // Several checkers can be open at once, so each remembers its own slot.
    ValidationCheck& check() { return report_.checks[index_]; }

    ValidationReport& report_;
    std::size_t index_;
};

/// First column of `vectors` outside `space`, if any.
std::optional<VecQ> outside(const SubspaceQ& space, const MatQ& vectors) {
    for (Index j = 0; j < vectors.cols(); ++j)
        if (!space.contains(VecQ(vectors.col(j)))) return VecQ(vectors.col(j));
    return std::nullopt;
}

VecQ unit(Index n, Index i) {
    VecQ v = VecQ::Zero(n);
    v(i) = 1;
    return v;
}

void check_product(const Model& m, ValidationReport& report, bool strict) {
    const int top = m.top_degree;
    const ProductTable* prod = m.product ? &*m.product : nullptr;
    auto mul = [&](int a, const VecQ& x, int b, const VecQ& y) { return prod->multiply(a, x, b, y, m.dim(a + b)); };

    Checker euler(report, "product_euler");
    Checker comm(report, "product_commutative");
    Checker assoc(report, "product_associative");
    Checker leibniz(report, "product_leibniz");
    if (!prod) {
        for (auto* c : {&euler, &comm, &assoc, &leibniz}) c->note("no product table; E is taken as given");
        if (strict) Checker(report, "product_filtration").note("no product table");
        return;
    }
    for (int a = 0; a <= top; ++a) {
        for (Index r = 0; r < m.dim(a); ++r) {
            const VecQ x = unit(m.dim(a), r);
            if (m.euler(a) * x != mul(a, x, 2, m.euler_cocycle))
                euler.fail("E(w) differs from w * euler_cocycle in degree " + std::to_string(a), x);
            for (int b = 0; b <= top; ++b) {
                for (Index s = 0; s < m.dim(b); ++s) {
                    const VecQ y = unit(m.dim(b), s);
                    const VecQ xy = mul(a, x, b, y);
                    const int sign = (a * b) % 2 == 0 ? 1 : -1;
                    if (xy != Rational(sign) * mul(b, y, a, x))
                        comm.fail("graded commutativity fails for degrees " + std::to_string(a) + "," + std::to_string(b), xy);
                    VecQ lhs = m.differential(a + b) * xy;
                    VecQ rhs = mul(a + 1, m.differential(a) * x, b, y) +
                               Rational(a % 2 == 0 ? 1 : -1) * mul(a, x, b + 1, m.differential(b) * y);
                    if (a + b + 1 > top) lhs = rhs = VecQ(0);
                    if (lhs != rhs)
                        leibniz.fail("Leibniz rule fails for degrees " + std::to_string(a) + "," + std::to_string(b), lhs - rhs);
                    for (int c = 0; c <= top && a + b + c <= top; ++c) {
                        for (Index t = 0; t < m.dim(c); ++t) {
                            const VecQ z = unit(m.dim(c), t);
                            const VecQ left = mul(a + b, xy, c, z);
                            const VecQ right = mul(a, x, b + c, mul(b, y, c, z));
                            if (left != right) assoc.fail("associativity fails", left - right);
                        }
                    }
                }
            }
        }
    }
    if (!strict) return;
    Checker filt(report, "product_filtration");
    for (const auto& s : m.strata) {
        const int kmax = m.kmax(s.name);
        for (int l1 = 0; l1 <= kmax; ++l1)
            for (int l2 = 0; l2 <= kmax; ++l2)
                for (int a = 0; a <= top; ++a)
                    for (int b = 0; a + b <= top; ++b) {
                        const auto fa = m.filtration(s.name, l1, a);
                        const auto fb = m.filtration(s.name, l2, b);
                        const auto target = m.filtration(s.name, l1 + l2, a + b);
                        for (Index r = 0; r < fa.dim(); ++r)
                            for (Index t = 0; t < fb.dim(); ++t) {
                                const VecQ xy = mul(a, fa.basis().col(r), b, fb.basis().col(t));
                                if (!target.contains(xy))
                                    filt.fail("product leaves level " + std::to_string(l1 + l2) + " of '" + s.name + "'", xy);
                            }
                    }
    }
}

}  // namespace

ValidationReport validate(const Model& m, bool strict) {
    ValidationReport report;
    {
        Checker c(report, "shapes");
        try {
            m.check_shapes();
            for (const auto& p : m.perversities) check_perversity(m, p);
        } catch (const std::exception& e) {
            c.fail(e.what());
            return report;
        }
    }
    const int top = m.top_degree;
    {
        Checker c(report, "complex");
        for (int k = 0; k + 2 <= top; ++k) {
            const MatQ dd = m.differential(k + 1) * m.differential(k);
            for (Index j = 0; j < dd.cols(); ++j)
                if (!is_zero(dd.col(j))) c.fail("not a complex: d*d != 0 in degree " + std::to_string(k), unit(m.dim(k), j));
        }
    }
    {
        Checker bounds(report, "filtration_bounds");
        Checker nested(report, "filtration_nested");
        for (const auto& s : m.strata) {
            const int kmax = m.kmax(s.name);
            for (int k = 0; k <= top; ++k) {
                const auto floor = m.filtration(s.name, -1, k);
                if (!floor.is_zero()) bounds.fail("level -1 of '" + s.name + "' is not zero", floor.basis().col(0));
                const auto full = m.filtration(s.name, kmax, k);
                if (!full.is_full()) bounds.fail("top level of '" + s.name + "' is not everything");
                for (int l = -1; l < kmax; ++l) {
                    if (auto v = outside(m.filtration(s.name, l + 1, k), m.filtration(s.name, l, k).basis()))
                        nested.fail("level " + std::to_string(l) + " of '" + s.name + "' not inside the next one", *v);
                }
            }
            if (!m.filtration(s.name, 0, 0).is_full()) bounds.fail("degree 0 must sit in level 0 of '" + s.name + "'");
        }
    }
    {
        Checker c(report, "euler_chain_map");
        for (int k = 0; k + 3 <= top; ++k) {
            const MatQ diff = m.euler(k + 1) * m.differential(k) - m.differential(k + 2) * m.euler(k);
            for (Index j = 0; j < diff.cols(); ++j)
                if (!is_zero(diff.col(j))) c.fail("E does not commute with d in degree " + std::to_string(k), unit(m.dim(k), j));
        }
    }
    {
        Checker c(report, "euler_cocycle_closed");
        if (top >= 3 && !is_zero(m.differential(2) * m.euler_cocycle))
            c.fail("d(euler_cocycle) != 0", m.euler_cocycle);
    }
    {
        Checker c(report, "euler_cocycle_placement");
        const Perversity e = euler_perversity(m);
        for (const auto& s : m.strata)
            if (top >= 2 && !m.filtration(s.name, e[s.name], 2).contains(m.euler_cocycle))
                c.fail("euler_cocycle outside level " + std::to_string(e[s.name]) + " of '" + s.name + "'", m.euler_cocycle);
    }
    if (strict) {
        Checker c(report, "euler_filtration");
        const Perversity e = euler_perversity(m);
        for (const auto& s : m.strata) {
            for (int l = -1; l <= m.kmax(s.name); ++l)
                for (int k = 0; k + 2 <= top; ++k) {
                    const auto src = m.filtration(s.name, l, k);
                    if (auto v = outside(m.filtration(s.name, l + e[s.name], k + 2), m.euler(k) * src.basis()))
                        c.fail("E moves level " + std::to_string(l) + " of '" + s.name + "' too far", *v);
                }
        }
    }
    check_product(m, report, strict);
    return report;
}

}  // namespace eqih
