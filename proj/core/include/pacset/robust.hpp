#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pacset/scores.hpp"

namespace pacset {

// Robust calibration over an uncertainty set of importance weights: the
// bound is maximized over per-example intervals, the maximizer being the
// greedy choice of upper end on erroneous examples and lower end on covered
// ones. Widening an error weight can only add an error to the accepted
// subsample; widening a covered weight only dilutes it.

struct IwInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct UncertaintySet {
  std::vector<IwInterval> intervals;  // one per calibration example
  double delta_w = 0.0;  // confidence spent on the set containing w*

  // Checks 0 <= lower <= upper per coordinate and the expected length.
  void validate(std::size_t m) const;
};

// Worst-case weights at tau: upper_i where score_i < tau, lower_i otherwise.
std::vector<double> greedy_worst_case(const ScoreSet& scores, double tau,
                                      const UncertaintySet& set);

// max over w in the set of U_RSCP(tau, w) = U_RSCP at the greedy weights.
double robust_u_rscp(const ScoreSet& scores, double tau,
                     const UncertaintySet& set, double b,
                     std::span<const double> uniforms, double delta_c);

enum class ScanPolicy {
  // Stop at the first violating grid point (the calibration algorithm's
  // break; default). The robust bound is not provably monotone in tau once
  // the acceptance set shifts, so a full scan is kept as a diagnostic.
  break_on_violation,
  // Keep scanning until the bound exceeds stop_factor * epsilon, recording
  // a per-segment trace.
  scan_to_stop,
};

// PS-W: draw V once from (seed, "rejection"), then scan the threshold grid
// ascending, rebuilding the greedy weights and the acceptance set at every
// step. The result holds with confidence 1 - delta_c - set.delta_w.
// Throws std::invalid_argument if any interval upper is infinite (the
// max-IW bound b would be meaningless).
CalibrationResult ps_w_calibrate(const ScoreSet& scores,
                                 const UncertaintySet& set, double b,
                                 double epsilon, double delta_c,
                                 const GridSpec& grid, std::uint64_t seed,
                                 ScanPolicy policy = ScanPolicy::break_on_violation);

}  // namespace pacset
