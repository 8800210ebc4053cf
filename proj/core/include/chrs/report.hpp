#pragma once

#include <string>

namespace chrs {

enum class Mode { Exact, MonteCarlo };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

/// Computed distance vs. a reference bound. In Monte Carlo mode mc_error is
/// the bootstrap noise floor of the distance estimate and the pass rule gets
/// a 3 sigma allowance; in exact mode mc_error is 0. Bounds that do not apply
/// (premises unmet, or vacuous because the value exceeds 2) keep their
/// computed value but are flagged, and flagged bounds are never counted as
/// passes by the experiment runner.
struct GapReport {
  double lhs_distance = 0.0;
  double bound_value = 0.0;
  std::string bound_id;
  bool bound_applicable = true;
  bool pass = false;
  Mode mode = Mode::Exact;
  double mc_error = 0.0;
};

inline GapReport make_gap_report(double lhs, double bound, std::string bound_id, bool applicable,
                                 Mode mode, double mc_error) {
  GapReport g;
  g.lhs_distance = lhs;
  g.bound_value = bound;
  g.bound_id = std::move(bound_id);
  g.bound_applicable = applicable;
  g.mode = mode;
  g.mc_error = (mode == Mode::Exact) ? 0.0 : mc_error;
  g.pass = lhs <= bound + 3.0 * g.mc_error;
  return g;
}

}  // namespace chrs
