#pragma once

#include <string>
#include <vector>

#include "psalg/random_expr.hpp"

namespace psalg {

// One verified identity: pass iff the residual that must vanish is exactly
// zero (or the stated hbar-order bound holds). Residuals are rendered in
// canonical text for debuggability.
struct IdentityRecord {
    std::string id;
    std::string claim;
    bool passed = false;
    std::string residual;       // canonical text; "0" when the identity holds
    std::string residualOrder;  // hbar-order of the residual; "inf" for zero
    double wallMs = 0.0;
};

struct SuiteReport {
    std::string suite;
    int n = 0;
    RandomExprPolicy policy;
    std::vector<IdentityRecord> entries;
    double wallMs = 0.0;

    bool passed() const {
        for (const auto& e : entries)
            if (!e.passed) return false;
        return true;
    }
};

// Known suite names, "all" included.
const std::vector<std::string>& suiteNames();

// Runs one named identity suite. Reports are deterministic for identical
// (name, n, policy): entries appear in declaration order and all residual
// checks are exact.
SuiteReport runSuite(const std::string& name, int n, const RandomExprPolicy& policy);

std::string renderReportText(const SuiteReport& report, bool withTimings = false);
std::string renderReportJson(const SuiteReport& report, bool withTimings = false);

} // namespace psalg
