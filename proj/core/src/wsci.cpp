#include "pacset/wsci.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pacset/binom.hpp"

namespace pacset {

WeightedConformal::WeightedConformal(
    std::span<const double> calibration_scores,
    std::span<const double> calibration_weights) {
  if (calibration_scores.size() != calibration_weights.size())
    throw std::invalid_argument("wsci: scores and weights differ in length");
  if (calibration_scores.empty())
    throw std::invalid_argument("wsci: empty calibration set");
  double total = 0.0;
  for (double w : calibration_weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("wsci: weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0))
    throw std::invalid_argument("wsci: weights must not all be zero");

  // Ascending nonconformity (-score) == descending score.
  std::vector<std::size_t> order(calibration_scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return calibration_scores[a] > calibration_scores[b];
  });
  scores_desc_.reserve(order.size());
  prefix_mass_.reserve(order.size());
  double acc = 0.0;
  for (std::size_t i : order) {
    scores_desc_.push_back(calibration_scores[i]);
    acc += calibration_weights[i];
    prefix_mass_.push_back(acc);
  }
}

double WeightedConformal::threshold(double test_weight, double epsilon) const {
  require_probability_open(epsilon, "epsilon");
  if (!(test_weight >= 0.0) || !std::isfinite(test_weight))
    throw std::invalid_argument("wsci: test weight must be finite and >= 0");
  const double target =
      (1.0 - epsilon) * (prefix_mass_.back() + test_weight);
  const auto it =
      std::lower_bound(prefix_mass_.begin(), prefix_mass_.end(), target);
  if (it == prefix_mass_.end()) {
    // The quantile sits on the +inf nonconformity atom: include everything.
    return 0.0;
  }
  return scores_desc_[static_cast<std::size_t>(it - prefix_mass_.begin())];
}

double wsci_calibrate(std::span<const double> calibration_scores,
                      std::span<const double> calibration_weights,
                      double test_weight, double epsilon) {
  return WeightedConformal(calibration_scores, calibration_weights)
      .threshold(test_weight, epsilon);
}

}  // namespace pacset
