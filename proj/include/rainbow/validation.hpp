#pragma once

#include <string>
#include <vector>

namespace rainbow {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;  // worst deviation seen
    double tolerance = 0.0;
    std::string detail;
};

/// Oracle-equivalence and invariant checks over small, fixed geometries.
std::vector<CheckResult> run_validation_suite();

} // namespace rainbow
