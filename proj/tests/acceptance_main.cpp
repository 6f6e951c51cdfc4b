#include <cstdio>

#include "fermikit/acceptance.hpp"

int main() {
  int failed = 0;
  fermikit::run_acceptance({}, [&](const fermikit::CriterionResult& r) {
    std::printf("%s\n", fermikit::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  });
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
