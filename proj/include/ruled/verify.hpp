#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ruled {

struct VerifyOptions {
    std::uint64_t seed = 1;
    /// Scenario count for crosscheck, chain length for chain.
    std::optional<int> steps;
    std::uint64_t budget = 200000;
};

struct SuiteResult {
    std::string name;
    int passed = 0;
    int total = 0;
    double seconds = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty() && passed == total; }
};

std::vector<std::string> suite_names();
/// ParseError for an unknown name.
SuiteResult run_suite(const std::string& name, const VerifyOptions& opt);

}  // namespace ruled
