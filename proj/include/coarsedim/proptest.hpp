#pragma once

// Randomized property suites over small generated instances. Every instance
// is built so that the hypotheses of the checked statement hold; each case
// compares library output against a brute-force recomputation.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coarsedim {

struct SuiteResult {
  std::string suite;
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::vector<std::string> failures;  // first few, with the case index
};

struct PropReport {
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;
  [[nodiscard]] bool ok() const noexcept;
};

// coincidence, double-control, glue, glue-chain, neighborhood, oracle
const std::vector<std::string>& proptest_suites();

// Runs one suite, or every suite for "all". Throws std::invalid_argument for
// an unknown suite name.
PropReport run_proptest(std::string_view suite, std::size_t cases, std::uint64_t seed);

}  // namespace coarsedim
