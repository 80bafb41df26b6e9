#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace linform {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    bool advisory = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240601;
    /// Criterion ids to run; empty runs all of them.
    std::vector<int> only;
    /// Called after each criterion finishes, e.g. to stream progress.
    std::function<void(const CriterionResult&)> on_result;
};

/// Runs the acceptance criteria in order. A criterion passes only if its
/// checks hold and it finishes inside its time budget.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// "PASS  3  name  (0.01 s, limit 1 s)  detail"; advisory misses print ADVISORY.
std::string format_result_line(const CriterionResult& r);

/// True when every non-advisory criterion passed.
bool all_required_passed(const std::vector<CriterionResult>& results);

}  // namespace linform
