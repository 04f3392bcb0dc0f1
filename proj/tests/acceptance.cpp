// Runs every acceptance criterion and prints one line per criterion.

#include <cstdio>

#include "support/criteria.hpp"

int main() {
  int failed = 0;
  for (const auto& c : torembed::testing::criteria()) {
    const auto r = c.run();
    std::printf("criterion %2d %s  %-44s %6.2fs  %s\n", c.id, r.pass ? "PASS" : "FAIL", c.title.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, torembed::testing::criteria().size());
  return failed == 0 ? 0 : 1;
}
