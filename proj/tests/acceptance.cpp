#include <cstdio>
#include <cstdlib>

#include "cifh/validation.hpp"

// One PASS/FAIL line per acceptance criterion. Optional argv[1] filters.
int main(int argc, char** argv) {
  cifh::validation::SuiteOptions opt;
  if (argc > 1) opt.filter = argv[1];
  if (const char* s = std::getenv("CIFH_SEED")) opt.seed = std::strtoull(s, nullptr, 10);
  int failed = 0, ran = 0;
  cifh::validation::run_suite(opt, [&](const cifh::validation::CriterionResult& r) {
    std::printf("%s\n", cifh::validation::format_result(r).c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
    ++ran;
  });
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 && ran > 0 ? 0 : 1;
}
