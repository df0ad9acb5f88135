#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pacset/robust.hpp"
#include "pacset/scores.hpp"
#include "pacset/synth.hpp"

namespace pacset {

// Monte Carlo validation on the synthetic two-Gaussian shift: the test set
// is generated once from the master seed, calibration data and rejection
// randomness are regenerated per trial, and the per-trial target error is
// compared against epsilon.

struct RunConfig {
  Method method = Method::ps_r;
  double epsilon = 0.1;
  // Desk-scale default; the paper-scale 1e-5 is reachable but unobservable
  // over few hundred trials.
  double delta = 0.1;
  std::optional<double> delta_c;  // default: delta / 2
  std::optional<double> delta_w;  // default: delta / 2
  std::size_t bins = 10;
  double smoothness_e = 0.001;
  GridSpec grid;
  std::uint64_t seed = 0;
  std::size_t trials = 500;
  TwoGaussianConfig data;  // m, n, test_size, dim, variances, temperature
  // ps-r / ps-c / wsci weight source: exact IWs with the exact b, or the
  // heuristic IWs emitted by the (possibly temperature-distorted) domain
  // classifier with the matching bound.
  bool use_true_iw = true;
  ScanPolicy scan = ScanPolicy::break_on_violation;
  unsigned threads = 1;

  double resolved_delta_c() const { return delta_c.value_or(delta / 2.0); }
  double resolved_delta_w() const { return delta_w.value_or(delta / 2.0); }
  void validate() const;
};

struct TrialRow {
  std::size_t trial = 0;
  double tau_hat = 0.0;
  double bound = 1.0;
  std::int64_t n_accepted = 0;
  bool feasible = false;
  double error = 0.0;      // target test-set error at tau_hat
  double mean_size = 0.0;  // mean prediction-set size on the test set
};

struct Aggregate {
  double violation_rate = 0.0;  // fraction of trials with error > epsilon
  double mean_error = 0.0;
  double mean_size = 0.0;
  double size_p25 = 0.0;
  double size_p50 = 0.0;
  double size_p75 = 0.0;
};

struct TrialReport {
  RunConfig config;
  std::vector<TrialRow> trials;
  Aggregate aggregate;
};

// Runs config.trials independent calibrations. Deterministic for a fixed
// master seed regardless of thread count: every trial derives its own
// streams from (seed, trial index) and rows are stored by index.
TrialReport mc_validate(const RunConfig& config);

// One calibration on already-generated data against a fixed test set;
// exposed for tests that need matched trials across methods.
TrialRow run_trial(const RunConfig& config, const SynthData& calibration,
                   std::span<const SynthExample> test,
                   std::size_t trial_index);

}  // namespace pacset
