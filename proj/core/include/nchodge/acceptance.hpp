#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nchodge/scalar.hpp"

namespace nchodge {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    /// Exact modes check exact zeros (plus a float shadow where stated);
    /// complex_float checks residual thresholds instead.
    ScalarMode mode = ScalarMode::rational;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    /// Random triples per algebra for the form-product properties.
    std::size_t random_triples = 200;
    /// Random complexes for the classical Hodge checks.
    std::size_t random_complexes = 50;
    /// Wall-clock budget for the whole run.
    double time_budget_seconds = 300.0;
    /// Called after each criterion finishes, e.g. to stream a table.
    std::function<void(const CriterionResult&)> on_result;
};

/// Runs criteria 1..12 in order. Criterion 12 times the whole run and
/// regenerates a set of reports twice to compare their bytes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// "PASS  3  name  detail  (0.12 s)".
std::string format_result(const CriterionResult& r);

}  // namespace nchodge
