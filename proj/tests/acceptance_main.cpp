#include <algorithm>
#include <iostream>

#include "CLI11.hpp"
#include "kpp/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  kpp::AcceptanceOptions opt;
  std::vector<int> known;
  app.add_flag("--quick", opt.quick, "reduced sizes");
  app.add_option("--only", opt.only, "criterion numbers");
  app.add_option("--seed", opt.seed, "base seed");
  app.add_option("--known-failures", known, "criteria whose FAIL does not change the exit status");
  CLI11_PARSE(app, argc, argv);
  opt.log = &std::cout;
  const auto results = kpp::run_acceptance(opt);
  int failed = 0, unexpected = 0;
  for (const auto& r : results) {
    if (r.pass) continue;
    ++failed;
    if (std::find(known.begin(), known.end(), r.id) == known.end()) ++unexpected;
    else std::cout << "known failure: C" << r.id << std::endl;
  }
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed" << std::endl;
  return unexpected ? 1 : 0;
}
