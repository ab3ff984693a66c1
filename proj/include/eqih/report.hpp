#pragma once

// Structured reports (schema "eqih-report/1") and the JSON encodings of the
// library's result types. Field order is fixed so reports diff cleanly.

#include "eqih/localize.hpp"
#include "eqih/model_io.hpp"
#include "eqih/spectral.hpp"

#include <ostream>

namespace eqih {

inline constexpr const char* kReportSchema = "eqih-report/1";

enum class ReportStatus { pass, violation, input_error };

std::string to_string(ReportStatus status);

struct ReportCheck {
    std::string name;
    bool passed = true;
    std::string detail;
    /// Counterexample data for a failed check.
    Json data;
};

struct Report {
    std::vector<std::string> command;
    std::string model;
    Json results = Json::object();
    std::vector<ReportCheck> checks;
    /// Set for input errors and for violations thrown mid-computation.
    std::optional<std::string> error;
    ReportStatus status_override = ReportStatus::pass;

    void check(const std::string& name, bool passed, const std::string& detail = {}, Json data = {});
    ReportStatus status() const;
    Json to_json() const;
};

/// Indented "key: value" rendering of a report for terminals.
void write_human(const Json& report, std::ostream& out);

Json dims_to_json(const std::vector<Index>& dims);
Json exactness_to_json(const ExactnessReport& report);
Json page_to_json(const SpectralPage& page);
Json poly_matrix_to_json(const PolyMatrix& m);
Json localized_to_json(const LocalizedModule& il);

}  // namespace eqih
