#include <doctest.h>

#include "core/selfcheck.hpp"

using namespace gscir;

TEST_CASE("self-checks pass on a healthy build") {
  auto results = run_self_checks();
  REQUIRE(results.size() == 4);
  for (const auto& r : results) {
    CAPTURE(r.name);
    CAPTURE(r.detail);
    CHECK(r.passed);
  }
  CHECK(all_passed(results));
}

TEST_CASE("a corrupted threshold constant trips the prox check") {
  SelfCheckOptions opt;
  opt.threshold_scale = 1.1;  // 10% off
  auto results = run_self_checks(opt);
  bool prox_failed = false;
  for (const auto& r : results)
    if (r.name == "prox_oracle_equivalence") prox_failed = !r.passed;
  CHECK(prox_failed);
  CHECK(!all_passed(results));
}
