#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jst {

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    double seconds;
    std::string detail;
};

struct SelfCheckOptions {
    std::vector<int> only;  // empty = run everything
    int inject_fault = 0;   // force the given criterion to fail (test hook)
};

/// Runs the built-in verification suite on the fixture profiles and prints
/// one pass/fail line per criterion to `log` (when given).
std::vector<CriterionResult> run_acceptance(const SelfCheckOptions& opts = {},
                                            std::ostream* log = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace jst
