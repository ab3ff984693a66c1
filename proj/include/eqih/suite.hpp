#pragma once

// The invariant suite behind `eqih selftest` and the acceptance test: every
// fixture and a batch of seeded random models pushed through all
// computations, with verdicts grouped into nine numbered criteria.

#include "eqih/classify.hpp"
#include "eqih/model_io.hpp"
#include "eqih/spectral.hpp"

namespace eqih {

/// The stored fixture expectations (data/expectations.json, compiled in).
const Json& expectations();

/// Measures one expectation quantity; throws std::invalid_argument for an unknown name.
Json measure(const Session& s, const Perversity& p, const std::string& quantity);

struct CriterionResult {
    int id = 0;
    std::string name;
    std::size_t checks = 0;
    std::vector<std::string> failures;
    bool passed() const { return failures.empty(); }
};

struct SuiteOptions {
    int seeds = 100;
    int random_size = 2;
    bool parallel = false;
};

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    std::size_t models = 0;
    std::size_t perversities = 0;
    /// Suite models whose d3 composite is nonzero somewhere.
    std::size_t d3_nonzero = 0;
    std::size_t skjelbred_eligible = 0;
    bool passed() const;
};

SuiteResult run_suite(const SuiteOptions& options);

Json to_json(const SuiteResult& result);

}  // namespace eqih
