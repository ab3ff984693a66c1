#include "eqih/report.hpp"

namespace eqih {

std::string to_string(ReportStatus status) {
    switch (status) {
        case ReportStatus::pass: return "pass";
        case ReportStatus::violation: return "violation";
        case ReportStatus::input_error: return "input_error";
    }
    return "unknown";
}

void Report::check(const std::string& name, bool passed, const std::string& detail, Json data) {
    checks.push_back({name, passed, detail, std::move(data)});
}

ReportStatus Report::status() const {
    if (status_override != ReportStatus::pass) return status_override;
    for (const auto& c : checks)
        if (!c.passed) return ReportStatus::violation;
    return ReportStatus::pass;
}

Json Report::to_json() const {
    Json out;
    out["schema"] = kReportSchema;
    out["command"] = command;
    out["model"] = model;
    out["status"] = eqih::to_string(status());
    if (error) out["error"] = *error;
    out["results"] = results;
    Json list = Json::array();
    for (const auto& c : checks) {
        Json j;
        j["name"] = c.name;
        j["passed"] = c.passed;
        if (!c.detail.empty()) j["detail"] = c.detail;
        if (!c.data.is_null()) j["data"] = c.data;
        list.push_back(std::move(j));
    }
    out["checks"] = list;
    return out;
}

namespace {

bool is_flat(const Json& j) {
    if (!j.is_array()) return false;
    for (const auto& x : j)
        if (x.is_structured() && !is_flat(x)) return false;
    return true;
}

void write_node(const Json& j, std::ostream& out, int indent) {
    const std::string pad(std::size_t(indent) * 2, ' ');
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object() || (value.is_array() && !is_flat(value))) {
                out << pad << key << ":\n";
                write_node(value, out, indent + 1);
            } else {
                out << pad << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
            }
        }
    } else if (j.is_array()) {
        std::size_t k = 0;
        for (const auto& value : j) {
            out << pad << "- [" << k++ << "]\n";
            write_node(value, out, indent + 1);
        }
    } else {
        out << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

}  // namespace

void write_human(const Json& report, std::ostream& out) { write_node(report, out, 0); }

Json dims_to_json(const std::vector<Index>& dims) {
    Json out = Json::array();
    for (Index d : dims) out.push_back(d);
    return out;
}

Json exactness_to_json(const ExactnessReport& report) {
    Json nodes = Json::array();
    for (const auto& n : report.nodes) {
        Json j;
        j["label"] = n.label;
        j["degree"] = n.degree;
        j["dim"] = n.dim;
        j["rank_in"] = n.rank_in;
        j["rank_out"] = n.rank_out;
        j["checked"] = n.checked;
        j["exact"] = n.exact;
        nodes.push_back(std::move(j));
    }
    Json out;
    out["exact"] = report.exact();
    out["nodes"] = nodes;
    return out;
}

Json page_to_json(const SpectralPage& page) {
    Json cells = Json::array();
    for (const auto& [key, cell] : page.cells) {
        if (cell.dim() == 0) continue;
        cells.push_back(Json::array({key.first, key.second, cell.dim()}));
    }
    Json diffs = Json::array();
    for (const auto& [key, d] : page.d) {
        const Index r = rank(d);
        if (r == 0) continue;
        diffs.push_back(Json::array({key.first, key.second, r}));
    }
    Json out;
    out["r"] = page.r;
    out["cells"] = cells;
    out["nonzero_differentials"] = diffs;
    return out;
}

Json poly_matrix_to_json(const PolyMatrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols; ++j) row.push_back(m(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

Json localized_to_json(const LocalizedModule& il) {
    Json out;
    out["even"] = il.even;
    out["odd"] = il.odd;
    return out;
}

}  // namespace eqih
