#pragma once

#include <cstdint>
#include <span>

#include "pacset/scores.hpp"

namespace pacset {

// Threshold-parameterized prediction sets over a calibration ScoreSet, the
// Clopper-Pearson bound on their error, and the i.i.d. calibrators.

// Empirical error count #{ i : score_i < tau }; monotone in tau.
std::int64_t empirical_error_count(const ScoreSet& scores, double tau);

// U_CP at tau: cp_upper(empirical_error_count(scores, tau), m, delta).
double u_cp(const ScoreSet& scores, double tau, double delta);

enum class CalibrationMode { exact, grid };

// Largest threshold whose CP bound stays within epsilon at confidence
// 1 - delta. Exact mode solves the order-statistic form directly; grid mode
// reproduces the ascending scan (stopping once the bound exceeds
// stop_factor * epsilon). The two agree to within one grid step.
// Infeasible problems return the trivial solution tau_hat = 0 with
// feasible = false rather than throwing.
CalibrationResult ps_calibrate(const ScoreSet& scores, double epsilon,
                               double delta,
                               CalibrationMode mode = CalibrationMode::exact,
                               const GridSpec& grid = {});

// Covariate-shift-conservative variant: identical to ps_calibrate run at
// epsilon / b. Requires b >= 1.
CalibrationResult ps_c_calibrate(const ScoreSet& scores, double epsilon,
                                 double delta, double b,
                                 CalibrationMode mode = CalibrationMode::exact,
                                 const GridSpec& grid = {});

struct Evaluation {
  double error_rate = 0.0;
  double mean_size = 0.0;
};

// Test-set metrics at a fixed threshold: error is the fraction of examples
// whose true-label score falls below tau, size the mean of the supplied
// per-example set sizes (counts of labels scoring >= tau).
Evaluation evaluate(std::span<const double> test_true_scores,
                    std::span<const double> set_sizes, double tau);

namespace detail {

enum class StopPolicy { stop_factor, first_violation };

// Ascending grid scan over a fixed bound sample (no per-tau reweighting):
// used by PS in grid mode and by PS-R once the accepted set is drawn. The
// bound depends on tau only through the error count, so it is evaluated
// once per run of equal counts.
CalibrationResult grid_scan_fixed(std::span<const double> sorted_sample,
                                  double epsilon, double delta,
                                  const GridSpec& grid, StopPolicy policy,
                                  Method tag);

// Exact order-statistic solver shared by the exact calibrators.
CalibrationResult exact_calibrate(const ScoreSet& scores, double epsilon,
                                  double delta, Method tag);

}  // namespace detail

}  // namespace pacset
