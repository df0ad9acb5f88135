#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pacset/predset.hpp"
#include "pacset/scores.hpp"

namespace pacset {

// Rejection sampling from source to target samples and the calibrator built
// on top of it: example i is accepted when V_i <= w_i / b, and the CP bound
// is applied to the accepted subsample.

struct RejectionInput {
  const ScoreSet& scores;             // m calibration scores, original order
  std::span<const double> weights;    // importance weights w_i >= 0
  double b;                           // max-IW bound, > 0
  std::span<const double> uniforms;   // V_i in [0, 1]
};

// Throws std::invalid_argument on length mismatch, b <= 0, negative
// weights, or uniforms outside [0, 1].
void validate(const RejectionInput& input);

struct AcceptedSet {
  std::vector<std::size_t> indices;  // ascending original indices
  // Diagnostic only: weights above b void the guarantee but are honored as
  // given (the acceptance probability saturates at 1 implicitly).
  std::size_t n_weight_over_bound = 0;

  std::size_t n() const { return indices.size(); }
};

// Deterministic given the inputs: i accepted iff V_i <= w_i / b.
AcceptedSet rejection_sample(const RejectionInput& input);

// U_RSCP at tau: the CP bound restricted to the accepted subsample. An empty
// accepted set carries no evidence and yields the conservative bound 1.
double u_rscp(const RejectionInput& input, double tau, double delta);

// The V vector consumed by the rejection-based calibrators: stream
// (seed, "rejection"), one uniform per calibration example.
std::vector<double> draw_rejection_uniforms(std::uint64_t seed, std::size_t m);

// PS-R: draw V once from the seed, fix the accepted subsample, then find the
// largest threshold whose RSCP bound stays within epsilon. Exact mode applies
// the order-statistic solver to the accepted subsample; grid mode scans
// ascending and breaks at the first violation. The two agree to a grid step.
CalibrationResult ps_r_calibrate(const ScoreSet& scores,
                                 std::span<const double> weights, double b,
                                 double epsilon, double delta,
                                 std::uint64_t seed,
                                 CalibrationMode mode = CalibrationMode::exact,
                                 const GridSpec& grid = {});

}  // namespace pacset
