#include <iostream>

#include "primerec/acceptance.hpp"

int main() {
  bool all = true;
  primerec::run_acceptance({}, [&](const primerec::CriterionResult& r) {
    std::cout << primerec::format_criterion(r) << std::endl;
    all = all && r.passed;
  });
  return all ? 0 : 1;
}
