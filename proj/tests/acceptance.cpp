// Runs acceptance criteria 1-12, one line each; exits nonzero if any fails.
#include <cstdio>

#include "dtrap/selftest.hpp"

int main() {
  int failed = 0;
  for (auto& r : dtrap::run_acceptance()) {
    std::printf("%s\n", dtrap::acceptance_line(r).c_str());
    failed += !r.pass;
  }
  std::printf("%d of 12 criteria passed\n", 12 - failed);
  return failed ? 1 : 0;
}
