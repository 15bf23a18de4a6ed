#include <stdexcept>

#include "coarsedim/proptest.hpp"
#include "doctest.h"

using namespace coarsedim;

TEST_CASE("suite list") {
  const auto& names = proptest_suites();
  CHECK(names == std::vector<std::string>{"coincidence", "double-control", "glue", "glue-chain", "neighborhood", "oracle"});
  CHECK_THROWS_AS(run_proptest("nope", 1, 1), std::invalid_argument);
}

TEST_CASE("every suite passes") {
  const auto report = run_proptest("all", 300, 7);
  CHECK(report.seed == 7);
  REQUIRE(report.suites.size() == 6);
  for (const auto& s : report.suites) {
    INFO(s.suite << ": " << (s.failures.empty() ? std::string() : s.failures.front()));
    CHECK(s.cases == 300);
    CHECK(s.violations == 0);
  }
  CHECK(report.ok());
}

TEST_CASE("runs are deterministic per seed") {
  for (const auto& suite : proptest_suites()) {
    const auto a = run_proptest(suite, 40, 123);
    const auto b = run_proptest(suite, 40, 123);
    REQUIRE(a.suites.size() == 1);
    CHECK(a.suites[0].violations == b.suites[0].violations);
    CHECK(a.suites[0].failures == b.suites[0].failures);
  }
  CHECK(run_proptest("glue", 200, 1).ok());
  CHECK(run_proptest("glue", 200, 99).ok());
}
