// Acceptance gate: runs every criterion at its pinned scale and tolerance and
// prints one pass/fail line per criterion. Nonzero exit on any failure.

#include <cstdio>
#include <cstring>
#include <string>
#include <thread>

#include "stablegen/acceptance.hpp"

int main(int argc, char** argv) {
  stablegen::AcceptanceOptions opts;
  opts.threads = static_cast<int>(std::min(8u, std::max(1u, std::thread::hardware_concurrency())));
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fast") == 0) {
      opts.fast = true;
    } else if (std::strcmp(argv[i], "--strict") == 0) {
      opts.fresh_seeds = true;
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      opts.threads = std::atoi(argv[++i]);
    } else {
      opts.only.emplace_back(argv[i]);
    }
  }
  bool all_pass = true;
  double total = 0.0;
  for (const stablegen::CriterionResult& result : stablegen::run_acceptance(opts)) {
    all_pass = all_pass && result.passed;
    total += result.seconds;
    std::printf("[%s] %-4s %-58s (%6.2fs) %s\n", result.passed ? "PASS" : "FAIL",
                result.id.c_str(), result.name.c_str(), result.seconds, result.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %s (%.1fs total)\n", all_pass ? "all criteria passed" : "FAILED",
              total);
  return all_pass ? 0 : 1;
}
