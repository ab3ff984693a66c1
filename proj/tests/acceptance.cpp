// Acceptance gate: the full invariant suite (fixtures plus 100 seeded random
// models), one PASS/FAIL line per criterion.

#include "eqih/suite.hpp"

#include <chrono>
#include <iostream>

int main() {
    const auto start = std::chrono::steady_clock::now();
    eqih::SuiteOptions options;
    options.seeds = 100;
    const eqih::SuiteResult result = eqih::run_suite(options);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();

    for (const auto& c : result.criteria) {
        std::cout << (c.passed() ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " (" << c.checks
                  << " checks)\n";
        for (std::size_t k = 0; k < c.failures.size() && k < 5; ++k) std::cout << "    " << c.failures[k] << "\n";
    }
    std::cout << "models " << result.models << ", perversities " << result.perversities << ", nonzero d3 in "
              << result.d3_nonzero << ", Skjelbred-eligible " << result.skjelbred_eligible << "\n";
    const bool fast = ms < 10000;
    std::cout << (fast ? "PASS" : "FAIL") << " runtime " << ms << " ms (limit 10000 ms)\n";
    return result.passed() && fast ? 0 : 1;
}
