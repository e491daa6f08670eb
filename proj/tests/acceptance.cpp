// Acceptance sweep: one pass/fail line per criterion.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "gcalc/config.hpp"
#include "gcalc/experiments.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  gcalc::AcceptanceOptions opt;
  opt.seed = gcalc::default_seed();
  bool all = true;
  for (const auto& r : gcalc::run_acceptance(opt, ids)) {
    std::cout << gcalc::criterion_line(r) << std::endl;
    all = all && r.pass;
  }
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all ? 0 : 1;
}
