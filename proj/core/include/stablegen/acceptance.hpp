#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stablegen {

struct CriterionResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  // Scales the statistical replica counts down 10x; thresholds and p-value
  // floors stay pinned.
  bool fast = false;
  // Replace the pinned seeds with clock-derived ones (strict reruns).
  bool fresh_seeds = false;
  int threads = 1;
  // Run only the listed criterion ids (e.g. {"A1", "A7"}); empty = all.
  std::vector<std::string> only;
};

// Runs the acceptance criteria A1..A12 and returns one result per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

}  // namespace stablegen
