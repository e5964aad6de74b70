// Acceptance suite runner: one PASS/FAIL line per criterion.
#include <iostream>

#include "CLI11.hpp"
#include "frachelm/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"frachelm acceptance suite"};
  std::vector<int> ids;
  app.add_option("-c,--criterion", ids, "criterion number(s) to run (default: all)")
      ->check(CLI::Range(1, frachelm::acceptance_criterion_count()));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  frachelm::run_acceptance(ids, [&](const frachelm::CriterionResult& r) {
    std::cout << frachelm::format_result(r) << std::endl;
    all = all && r.passed;
  });
  return all ? 0 : 1;
}
