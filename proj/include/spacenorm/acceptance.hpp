#ifndef SPACENORM_ACCEPTANCE_HPP
#define SPACENORM_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace spacenorm::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria (all of them, or the listed subset) and
/// returns one result per criterion.
std::vector<CriterionResult> run_all(const std::vector<int>& only = {});

/// Prints one pass/fail line per criterion; returns the failure count.
int run_and_print(std::ostream& os, const std::vector<int>& only = {});

}  // namespace spacenorm::acceptance

#endif
