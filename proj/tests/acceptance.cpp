// runs the ten acceptance criteria; one line per criterion, nonzero exit on any failure
#include <cstdlib>
#include <iostream>

#include "fraisse/suite.hpp"

int main(int argc, char** argv) {
  fraisse::SuiteOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  fraisse::run_suite(opt, [&](const fraisse::CriterionResult& r) {
    if (!r.pass) ++failed;
    std::cout << fraisse::format_result(r) << "  [" << r.seconds << " s]" << std::endl;
  });
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
