#pragma once
// End-to-end acceptance matrix: one entry per delivered guarantee, from
// operator structure audits through barrier residuals to solver-backed
// bound checks.  Each criterion owns a wall-clock budget; exceeding it
// fails the criterion just like a numeric miss.

#include <iosfwd>
#include <string>
#include <vector>

namespace plb {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;  // headline numbers, or the first recorded failure
};

struct AcceptanceOptions {
  int threads = 1;
  std::string filter;              // empty = all; else number or name substring
  std::ostream* stream = nullptr;  // one line per criterion when set
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

/// True when every selected criterion passed (and at least one ran).
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace plb
