#pragma once
#include <functional>
#include <string>
#include <vector>

namespace fraisse {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct SuiteOptions {
  unsigned seed = 1;      // drives the random mn sequences of criterion 9
  std::vector<int> only;  // empty: all ten
};

int criterion_count();
CriterionResult run_criterion(int id, const SuiteOptions& opt);
std::vector<CriterionResult> run_suite(const SuiteOptions& opt,
                                       const std::function<void(const CriterionResult&)>& on_result = {});
// "criterion N: PASS  title  (detail)"
std::string format_result(const CriterionResult& r);

}  // namespace fraisse
