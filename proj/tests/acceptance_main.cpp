// Runs the full acceptance matrix and prints one line per criterion.
// An optional argument filters by criterion number or name substring.
#include <iostream>

#include "plb/acceptance.hpp"

int main(int argc, char** argv) {
  plb::AcceptanceOptions opt;
  opt.stream = &std::cout;
  if (argc > 1) opt.filter = argv[1];
  auto results = plb::run_acceptance(opt);
  if (results.empty()) {
    std::cerr << "no criterion matches the filter\n";
    return 1;
  }
  return plb::all_passed(results) ? 0 : 1;
}
