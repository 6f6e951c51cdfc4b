#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fermikit {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // deterministic: measured values and thresholds only
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  std::vector<int> only;  // empty runs all twelve
};

// One line per criterion: "PASS  5  edge Tracy-Widom  ...".
std::string format_result(const CriterionResult& r);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace fermikit
