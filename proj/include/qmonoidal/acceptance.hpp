#pragma once

#include "qmonoidal/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qmon {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 2024;
  int jobs = 0;
};

inline constexpr int kCriteria = 12;

/// Runs criterion `id` (1..12). Thresholds are fixed per criterion and do not
/// follow the configurable tolerances; exceptions become failures.
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

}  // namespace qmon
