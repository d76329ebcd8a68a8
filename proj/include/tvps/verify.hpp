#pragma once

#include <string>
#include <vector>

namespace tvps {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Analytic checks of the controls (coincidence for SCV-1 pairs, convergence
/// as s grows, variability factors, light-traffic rates) and a stationary
/// M/M/1/PS simulation against its exact mean sojourn time and queue length.
/// `quick` shrinks the simulation to a few seconds.
std::vector<CheckResult> run_verification(bool quick);

}  // namespace tvps
