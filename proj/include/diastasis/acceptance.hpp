#pragma once

#include <functional>
#include <string>
#include <vector>

namespace diastasis::acceptance {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    /// One line; on failure it names the first failing instance.
    std::string detail;
    double seconds = 0;
};

/// Number of criteria, numbered 1..count().
int count();

CriterionResult run(int id);

/// Runs every criterion in order; on_result is called after each one.
std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {});

} // namespace diastasis::acceptance
