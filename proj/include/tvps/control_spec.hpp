#pragma once

#include <string>
#include <string_view>

namespace tvps {

enum class ControlKind { SquareRoot, DifferenceMatching, Constant };

/// "sr", "dm" or "const".
std::string to_string(ControlKind kind);
ControlKind parse_control(std::string_view name);

/// Parameters of a service-rate control. The variability factors are always
/// derived from the two SCVs.
struct ControlSpec {
  ControlKind kind = ControlKind::DifferenceMatching;
  double target_s = 1.0;  // target mean virtual response time
  double beta = 1.0;      // mean job size
  double ca2 = 1.0;       // SCV of the arrival base distribution
  double cs2 = 1.0;       // SCV of the job-size distribution
  double constant_rate = 0.0;  // used by ControlKind::Constant only

  double v_fcfs() const { return (ca2 + cs2) / 2.0; }
  double v_ps() const { return (ca2 + cs2) / (1.0 + cs2); }

  /// Throws std::invalid_argument on nonpositive parameters.
  void validate() const;
};

}  // namespace tvps
