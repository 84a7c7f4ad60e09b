#include "../property_suite.hpp"

#include <doctest.h>

TEST_CASE("structural invariants over randomized inputs") {
  const auto rep = props::run_all(2024);
  for (const auto& [name, n] : rep.cases) {
    CAPTURE(name);
    CHECK(rep.failures.count(name) == 0);
  }
  for (const auto& f : rep.first_failures) MESSAGE(f);
  CHECK(rep.total_cases() >= 10000);
}
