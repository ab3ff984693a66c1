#include "eqih/model_io.hpp"

#include <fstream>
#include <sstream>

namespace eqih {

namespace {

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

std::string at_index(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) throw ModelFormatError(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ModelFormatError(join(where, key), "missing field");
    return *it;
}

Rational rational_from_json(const Json& j, const std::string& where) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long long>());
    } catch (const std::invalid_argument& e) {
        throw ModelFormatError(where, e.what());
    }
    throw ModelFormatError(where, "expected a rational string such as \"3/4\"");
}

int int_from_json(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ModelFormatError(where, "expected an integer");
    return j.get<int>();
}

Index count_from_json(const Json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw ModelFormatError(where, "expected a nonnegative integer");
    return static_cast<Index>(j.get<long long>());
}

int level_key(const std::string& key, const std::string& where) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(key, &used);
        if (used == key.size()) return v;
    } catch (const std::exception&) {
    }
    throw ModelFormatError(where, "level key '" + key + "' is not an integer");
}

std::vector<MatQ> graded_maps(const Json* j, const Model& m, int shift, const std::string& where) {
    std::vector<MatQ> out;
    const std::size_t given = j ? j->size() : 0;
    if (j && !j->is_array()) throw ModelFormatError(where, "expected an array of matrices");
    if (given > std::size_t(m.top_degree + 1)) throw ModelFormatError(where, "more matrices than degrees");
    for (int k = 0; k <= m.top_degree; ++k) {
        if (std::size_t(k) < given)
            out.push_back(matrix_from_json((*j)[std::size_t(k)], m.dim(k + shift), m.dim(k), at_index(where, std::size_t(k))));
        else
            out.push_back(MatQ::Zero(m.dim(k + shift), m.dim(k)));
    }
    return out;
}

}  // namespace

MatQ matrix_from_json(const Json& j, Index rows, Index cols, const std::string& where) {
    if (!j.is_array()) throw ModelFormatError(where, "expected a matrix (list of rows)");
    MatQ out = MatQ::Zero(rows, cols);
    if (j.empty()) return out;
    if (j.size() != std::size_t(rows))
        throw ModelFormatError(where, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    for (Index r = 0; r < rows; ++r) {
        const auto& row = j[std::size_t(r)];
        const std::string rw = at_index(where, std::size_t(r));
        if (!row.is_array() || row.size() != std::size_t(cols))
            throw ModelFormatError(rw, "expected a row of " + std::to_string(cols) + " entries");
        for (Index c = 0; c < cols; ++c) out(r, c) = rational_from_json(row[std::size_t(c)], at_index(rw, std::size_t(c)));
    }
    return out;
}

VecQ vector_from_json(const Json& j, Index n, const std::string& where) {
    if (!j.is_array()) throw ModelFormatError(where, "expected a vector");
    VecQ out = VecQ::Zero(n);
    if (j.empty()) return out;
    if (j.size() != std::size_t(n))
        throw ModelFormatError(where, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
    for (Index i = 0; i < n; ++i) out(i) = rational_from_json(j[std::size_t(i)], at_index(where, std::size_t(i)));
    return out;
}

Json vector_to_json(const VecQ& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.rows(); ++i) out.push_back(to_string(v(i)));
    return out;
}

Json matrix_to_json(const MatQ& m) {
    Json out = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

Model model_from_json(const Json& doc) {
    if (!doc.is_object()) throw ModelFormatError("", "model document must be a JSON object");
    Model m;
    const auto& name = require(doc, "name", "");
    if (!name.is_string()) throw ModelFormatError("name", "expected a string");
    m.name = name.get<std::string>();
    m.top_degree = int_from_json(require(doc, "top_degree", ""), "top_degree");
    if (m.top_degree < 0) throw ModelFormatError("top_degree", "must be nonnegative");
    const auto& dims = require(doc, "dims", "");
    if (!dims.is_array() || dims.size() != std::size_t(m.top_degree + 1))
        throw ModelFormatError("dims", "expected top_degree + 1 dimensions");
    for (std::size_t k = 0; k < dims.size(); ++k) m.dims.push_back(count_from_json(dims[k], at_index("dims", k)));

    m.d = graded_maps(&require(doc, "d", ""), m, 1, "d");
    m.euler_op = graded_maps(doc.contains("euler_op") ? &doc["euler_op"] : nullptr, m, 2, "euler_op");
    m.euler_cocycle = doc.contains("euler_cocycle") ? vector_from_json(doc["euler_cocycle"], m.dim(2), "euler_cocycle")
                                                    : VecQ::Zero(m.dim(2));

    if (doc.contains("strata")) {
        const auto& strata = doc["strata"];
        if (!strata.is_array()) throw ModelFormatError("strata", "expected an array");
        for (std::size_t i = 0; i < strata.size(); ++i) {
            const std::string w = at_index("strata", i);
            const auto& sn = require(strata[i], "name", w);
            const auto& sk = require(strata[i], "kind", w);
            if (!sn.is_string() || !sk.is_string()) throw ModelFormatError(w, "name and kind must be strings");
            try {
                m.strata.push_back({sn.get<std::string>(), parse_stratum_kind(sk.get<std::string>())});
            } catch (const std::invalid_argument& e) {
                throw ModelFormatError(join(w, "kind"), e.what());
            }
        }
    }

    if (doc.contains("filtrations")) {
        const auto& filt = doc["filtrations"];
        if (!filt.is_object()) throw ModelFormatError("filtrations", "expected an object keyed by stratum");
        for (const auto& [stratum, levels] : filt.items()) {
            const std::string ws = join("filtrations", stratum);
            if (!levels.is_object()) throw ModelFormatError(ws, "expected an object keyed by level");
            std::map<int, std::vector<SubspaceQ>> parsed;
            for (const auto& [key, per_degree] : levels.items()) {
                const std::string wl = join(ws, key);
                const int level = level_key(key, wl);
                if (level < -1) throw ModelFormatError(wl, "levels start at -1");
                if (!per_degree.is_array() || per_degree.size() != std::size_t(m.top_degree + 1))
                    throw ModelFormatError(wl, "expected one list of basis vectors per degree");
                std::vector<SubspaceQ> spaces;
                for (int k = 0; k <= m.top_degree; ++k) {
                    const auto& vecs = per_degree[std::size_t(k)];
                    const std::string wk = at_index(wl, std::size_t(k));
                    if (!vecs.is_array()) throw ModelFormatError(wk, "expected a list of vectors");
                    MatQ gens(m.dim(k), Index(vecs.size()));
                    for (std::size_t c = 0; c < vecs.size(); ++c)
                        gens.col(Index(c)) = vector_from_json(vecs[c], m.dim(k), at_index(wk, c));
                    spaces.push_back(SubspaceQ::span(gens));
                }
                parsed[level] = std::move(spaces);
            }
            if (parsed.empty() || parsed.rbegin()->first < 0) throw ModelFormatError(ws, "needs at least level 0");
            const int kmax = parsed.rbegin()->first;
            std::vector<std::vector<SubspaceQ>> chain;
            for (int level = -1; level <= kmax; ++level) {
                auto it = parsed.find(level);
                if (it != parsed.end()) {
                    chain.push_back(it->second);
                } else if (level == -1) {
                    std::vector<SubspaceQ> zero;
                    for (int k = 0; k <= m.top_degree; ++k) zero.push_back(SubspaceQ::zero(m.dim(k)));
                    chain.push_back(std::move(zero));
                } else {
                    throw ModelFormatError(ws, "level " + std::to_string(level) + " missing");
                }
            }
            m.filtrations[stratum] = std::move(chain);
        }
    }

    if (doc.contains("product") && !doc["product"].is_null()) {
        const auto& prod = doc["product"];
        if (!prod.is_array()) throw ModelFormatError("product", "expected an array of degree blocks");
        ProductTable table;
        for (std::size_t i = 0; i < prod.size(); ++i) {
            const std::string w = at_index("product", i);
            const auto& deg = require(prod[i], "degrees", w);
            if (!deg.is_array() || deg.size() != 2) throw ModelFormatError(join(w, "degrees"), "expected [a, b]");
            const int a = int_from_json(deg[0], join(w, "degrees"));
            const int b = int_from_json(deg[1], join(w, "degrees"));
            if (a < 0 || b < 0 || a > m.top_degree || b > m.top_degree)
                throw ModelFormatError(join(w, "degrees"), "degree out of range");
            const auto& values = require(prod[i], "values", w);
            const std::string wv = join(w, "values");
            if (!values.is_array() || values.size() != std::size_t(m.dim(a)))
                throw ModelFormatError(wv, "expected one row per basis vector of degree " + std::to_string(a));
            std::vector<std::vector<VecQ>> block;
            for (std::size_t r = 0; r < values.size(); ++r) {
                if (!values[r].is_array() || values[r].size() != std::size_t(m.dim(b)))
                    throw ModelFormatError(at_index(wv, r), "expected one product per basis vector of degree " + std::to_string(b));
                std::vector<VecQ> row;
                for (std::size_t s = 0; s < values[r].size(); ++s)
                    row.push_back(vector_from_json(values[r][s], m.dim(a + b), at_index(at_index(wv, r), s)));
                block.push_back(std::move(row));
            }
            if (!table.entries.emplace(std::make_pair(a, b), std::move(block)).second)
                throw ModelFormatError(w, "degree pair listed twice");
        }
        m.product = std::move(table);
    }

    if (doc.contains("perversities")) {
        const auto& pv = doc["perversities"];
        if (!pv.is_array()) throw ModelFormatError("perversities", "expected an array");
        for (std::size_t i = 0; i < pv.size(); ++i) {
            const std::string w = at_index("perversities", i);
            if (!pv[i].is_object()) throw ModelFormatError(w, "expected an object stratum -> int");
            std::map<std::string, int> values;
            for (const auto& [s, v] : pv[i].items()) values[s] = int_from_json(v, join(w, s));
            m.perversities.emplace_back(std::move(values));
        }
    }

    if (doc.contains("cone") && !doc["cone"].is_null()) {
        const auto& c = doc["cone"];
        ConeData cone;
        const auto& apex = require(c, "apex", "cone");
        if (!apex.is_string()) throw ModelFormatError("cone.apex", "expected a string");
        cone.apex = apex.get<std::string>();
        const auto& ld = require(c, "link_dims", "cone");
        if (!ld.is_array()) throw ModelFormatError("cone.link_dims", "expected an array");
        for (std::size_t k = 0; k < ld.size(); ++k) cone.link_dims.push_back(count_from_json(ld[k], at_index("cone.link_dims", k)));
        const auto ldim = [&](int k) {
            return k >= 0 && std::size_t(k) < cone.link_dims.size() ? cone.link_dims[std::size_t(k)] : Index(0);
        };
        if (c.contains("link_eub")) {
            if (!c["link_eub"].is_object()) throw ModelFormatError("cone.link_eub", "expected an object keyed by degree");
            for (const auto& [key, mat] : c["link_eub"].items()) {
                const std::string w = join("cone.link_eub", key);
                const int k = level_key(key, w);
                cone.link_eub[k] = matrix_from_json(mat, ldim(k + 2), ldim(k), w);
            }
        }
        m.cone = std::move(cone);
    }

    if (doc.contains("metadata")) {
        const auto& md = doc["metadata"];
        if (!md.is_object()) throw ModelFormatError("metadata", "expected an object");
        if (md.contains("normal")) {
            if (!md["normal"].is_boolean()) throw ModelFormatError("metadata.normal", "expected a boolean");
            m.normal = md["normal"].get<bool>();
        }
        if (md.contains("free")) {
            if (!md["free"].is_boolean()) throw ModelFormatError("metadata.free", "expected a boolean");
            m.free = md["free"].get<bool>();
        }
    }

    try {
        m.check_shapes();
    } catch (const std::invalid_argument& e) {
        throw ModelFormatError("", e.what());
    }
    return m;
}

Model load_model(std::istream& in) {
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ModelFormatError("", std::string("JSON syntax error: ") + e.what());
    }
    return model_from_json(doc);
}

Model load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelFormatError(path, "cannot open file");
    try {
        return load_model(in);
    } catch (const ModelFormatError& e) {
        throw ModelFormatError(e.where.empty() ? path : path + ":" + e.where,
                               std::string(e.what()).substr(e.where.empty() ? 0 : e.where.size() + 2));
    }
}

Json to_json(const Model& m) {
    Json doc;
    doc["name"] = m.name;
    doc["top_degree"] = m.top_degree;
    doc["dims"] = m.dims;
    Json d = Json::array();
    for (int k = 0; k <= m.top_degree; ++k) d.push_back(matrix_to_json(m.differential(k)));
    doc["d"] = std::move(d);
    Json strata = Json::array();
    for (const auto& s : m.strata) strata.push_back({{"name", s.name}, {"kind", to_string(s.kind)}});
    doc["strata"] = std::move(strata);
    Json filt = Json::object();
    for (const auto& s : m.strata) {
        Json levels = Json::object();
        for (int level = -1; level <= m.kmax(s.name); ++level) {
            Json per_degree = Json::array();
            for (int k = 0; k <= m.top_degree; ++k) {
                Json vecs = Json::array();
                const auto sp = m.filtration(s.name, level, k);
                for (Index c = 0; c < sp.dim(); ++c) vecs.push_back(vector_to_json(sp.basis().col(c)));
                per_degree.push_back(std::move(vecs));
            }
            levels[std::to_string(level)] = std::move(per_degree);
        }
        filt[s.name] = std::move(levels);
    }
    doc["filtrations"] = std::move(filt);
    doc["euler_cocycle"] = vector_to_json(m.euler_cocycle);
    Json e = Json::array();
    for (int k = 0; k <= m.top_degree; ++k) e.push_back(matrix_to_json(m.euler(k)));
    doc["euler_op"] = std::move(e);
    if (m.product) {
        Json prod = Json::array();
        for (const auto& [deg, table] : m.product->entries) {
            Json values = Json::array();
            for (const auto& row : table) {
                Json r = Json::array();
                for (const auto& v : row) r.push_back(vector_to_json(v));
                values.push_back(std::move(r));
            }
            prod.push_back({{"degrees", {deg.first, deg.second}}, {"values", std::move(values)}});
        }
        doc["product"] = std::move(prod);
    }
    Json pv = Json::array();
    for (const auto& p : m.perversities) {
        Json o = Json::object();
        for (const auto& [s, v] : p.values()) o[s] = v;
        pv.push_back(std::move(o));
    }
    doc["perversities"] = std::move(pv);
    if (m.cone) {
        Json eub = Json::object();
        for (const auto& [k, mat] : m.cone->link_eub) eub[std::to_string(k)] = matrix_to_json(mat);
        doc["cone"] = {{"apex", m.cone->apex}, {"link_dims", m.cone->link_dims}, {"link_eub", std::move(eub)}};
    }
    doc["metadata"] = {{"normal", m.normal}, {"free", m.free}};
    return doc;
}

}  // namespace eqih
