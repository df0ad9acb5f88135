#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace pacset {

enum class Method { ps, ps_c, ps_r, ps_m, ps_w, wsci };

std::string_view method_name(Method method);
Method method_from_name(std::string_view name);

// Held-out true-label scores. Stored sorted ascending together with the
// stable permutation back to the original example order, since the
// rejection-based calibrators pair scores with per-example weights.
class ScoreSet {
 public:
  // Throws std::invalid_argument if empty or any score is non-finite.
  explicit ScoreSet(std::vector<double> scores);

  std::size_t size() const { return original_.size(); }
  const std::vector<double>& original() const { return original_; }
  const std::vector<double>& sorted() const { return sorted_; }
  // sorted()[i] == original()[order()[i]]; equal scores keep original order.
  const std::vector<std::size_t>& order() const { return order_; }
  double max_score() const { return sorted_.back(); }

  // #{ i : original[i] < tau }. Ties at tau count as covered, matching the
  // set definition C_tau(x) = { y | f(x, y) >= tau }.
  std::int64_t count_below(double tau) const;

 private:
  std::vector<double> original_;
  std::vector<double> sorted_;
  std::vector<std::size_t> order_;
};

// Ascending threshold grid: points tau_j = start + j * step.
struct GridSpec {
  double step = 1e-7;
  double stop_factor = 1.5;
  double start = 0.0;

  void validate() const;  // step > 0, stop_factor >= 1
  double point(std::uint64_t j) const {
    return start + static_cast<double>(j) * step;
  }
};

struct TracePoint {
  double tau = 0.0;
  double bound = 0.0;
};

struct CalibrationResult {
  double tau_hat = 0.0;
  double bound_at_tau = 1.0;
  // Errors among the sample the bound was computed on (the accepted
  // subsample for rejection-based methods, the full set otherwise).
  std::int64_t error_count = 0;
  bool feasible = false;
  Method method = Method::ps;
  std::int64_t n_accepted = 0;  // size of that sample
  // One entry per scanned grid segment; populated only by the scan-to-stop
  // diagnostic mode of the robust calibrator.
  std::vector<TracePoint> trace;
};

// Bitwise equality of the numeric outcome (tau_hat, bound, counts,
// feasibility); method tag and trace are ignored.
bool same_numbers(const CalibrationResult& a, const CalibrationResult& b);

}  // namespace pacset
