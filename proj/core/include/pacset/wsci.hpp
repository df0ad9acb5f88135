#pragma once

#include <span>
#include <vector>

namespace pacset {

// Weighted split conformal baseline. Nonconformity is the negated true-label
// score (larger score = more conforming), weights are importance weights
// normalized per test point with mass w_test placed at +inf nonconformity.
// The returned threshold is the score cutoff tau; prediction sets are
// { y | f(x, y) >= tau }. Carries a per-test-instance coverage level only,
// no training-conditional guarantee.
class WeightedConformal {
 public:
  // Throws std::invalid_argument on length mismatch, negative weights, or
  // all-zero weights.
  WeightedConformal(std::span<const double> calibration_scores,
                    std::span<const double> calibration_weights);

  // Weighted (1 - epsilon)-quantile for one test point. When the finite
  // calibration mass cannot reach the quantile the threshold falls below
  // every score (full sets, tau = 0).
  double threshold(double test_weight, double epsilon) const;

 private:
  std::vector<double> scores_desc_;   // scores sorted descending
  std::vector<double> prefix_mass_;   // cumulative weight along scores_desc_
};

// One-shot form.
double wsci_calibrate(std::span<const double> calibration_scores,
                      std::span<const double> calibration_weights,
                      double test_weight, double epsilon);

}  // namespace pacset
