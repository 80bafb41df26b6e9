#include "linform/acceptance.hpp"

#include <iostream>

int main() {
    linform::AcceptanceOptions opts;
    opts.on_result = [](const linform::CriterionResult& r) {
        std::cout << linform::format_result_line(r) << std::endl;
    };
    const auto results = linform::run_acceptance(opts);
    const bool ok = linform::all_required_passed(results);
    std::cout << (ok ? "acceptance: all required criteria passed" : "acceptance: FAILED") << std::endl;
    return ok ? 0 : 1;
}
