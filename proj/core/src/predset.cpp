#include "pacset/predset.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "pacset/binom.hpp"

namespace pacset {

std::int64_t empirical_error_count(const ScoreSet& scores, double tau) {
  return scores.count_below(tau);
}

double u_cp(const ScoreSet& scores, double tau, double delta) {
  return cp_upper(scores.count_below(tau),
                  static_cast<std::int64_t>(scores.size()), delta);
}

namespace detail {

namespace {

// Largest grid index j with point(j) <= value, if any. The predicate is
// monotone in j, so a plain binary search over indices is exact even when
// start + j * step plateaus in floating point.
std::optional<std::uint64_t> last_grid_le(const GridSpec& grid, double value) {
  if (grid.point(0) > value) return std::nullopt;
  std::uint64_t lo = 0;
  std::uint64_t hi = 1;
  while (grid.point(hi) <= value) {
    lo = hi;
    if (hi > (std::uint64_t{1} << 62)) break;  // grid effectively unbounded
    hi *= 2;
  }
  while (lo < hi - 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (grid.point(mid) <= value) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::int64_t count_below_sorted(std::span<const double> sorted, double tau) {
  return static_cast<std::int64_t>(
      std::lower_bound(sorted.begin(), sorted.end(), tau) - sorted.begin());
}

double bound_for(std::int64_t k, std::int64_t n, double delta) {
  return n == 0 ? 1.0 : cp_upper(k, n, delta);
}

}  // namespace

CalibrationResult grid_scan_fixed(std::span<const double> sorted_sample,
                                  double epsilon, double delta,
                                  const GridSpec& grid, StopPolicy policy,
                                  Method tag) {
  grid.validate();
  const std::int64_t n = static_cast<std::int64_t>(sorted_sample.size());

  CalibrationResult infeasible;
  infeasible.tau_hat = 0.0;
  infeasible.bound_at_tau = bound_for(count_below_sorted(sorted_sample, 0.0),
                                      n, delta);
  infeasible.error_count = count_below_sorted(sorted_sample, 0.0);
  infeasible.feasible = false;
  infeasible.method = tag;
  infeasible.n_accepted = n;

  const double cap = (n > 0 ? sorted_sample.back() : grid.start) + 1.0;
  const auto j_cap = last_grid_le(grid, cap);
  if (!j_cap) return infeasible;  // grid starts beyond every useful tau

  std::optional<std::uint64_t> feasible_j;
  double feasible_bound = 1.0;
  std::int64_t feasible_k = 0;

  // ptr = #{ sample < tau } for the current segment; the error count only
  // changes when tau passes a distinct sample value.
  std::size_t ptr = static_cast<std::size_t>(
      count_below_sorted(sorted_sample, grid.point(0)));
  std::uint64_t j_lo = 0;

  while (true) {
    const bool more_flips = ptr < sorted_sample.size();
    const double next_value =
        more_flips ? sorted_sample[ptr] : std::numeric_limits<double>::infinity();
    std::uint64_t j_hi = *j_cap;
    if (more_flips) {
      const auto le = last_grid_le(grid, next_value);
      if (le) j_hi = std::min(j_hi, *le);
      // le is always engaged here: next_value >= point(0) by construction.
    }

    bool stop = false;
    if (j_hi >= j_lo) {  // segment actually contains grid points
      const double bound = bound_for(static_cast<std::int64_t>(ptr), n, delta);
      if (bound <= epsilon) {
        feasible_j = j_hi;
        feasible_bound = bound;
        feasible_k = static_cast<std::int64_t>(ptr);
      } else if (policy == StopPolicy::first_violation ||
                 bound > grid.stop_factor * epsilon) {
        stop = true;
      }
      j_lo = j_hi + 1;
    }

    if (stop || !more_flips || j_hi >= *j_cap) break;
    // Advance past the tie group at next_value; those become errors.
    ptr = static_cast<std::size_t>(
        std::upper_bound(sorted_sample.begin() + ptr, sorted_sample.end(),
                         next_value) -
        sorted_sample.begin());
  }

  if (!feasible_j) return infeasible;
  CalibrationResult out;
  out.tau_hat = grid.point(*feasible_j);
  out.bound_at_tau = feasible_bound;
  out.error_count = feasible_k;
  out.feasible = true;
  out.method = tag;
  out.n_accepted = n;
  return out;
}

CalibrationResult exact_calibrate(const ScoreSet& scores, double epsilon,
                                  double delta, Method tag) {
  const std::int64_t m = static_cast<std::int64_t>(scores.size());

  CalibrationResult out;
  out.method = tag;
  out.n_accepted = m;

  if (cp_upper(0, m, delta) > epsilon) {
    out.tau_hat = 0.0;
    out.error_count = scores.count_below(0.0);
    out.bound_at_tau = cp_upper(out.error_count, m, delta);
    out.feasible = false;
    return out;
  }

  // Largest k with cp_upper(k, m, delta) <= epsilon; cp_upper is
  // non-decreasing in k, and k = m is never feasible (bound 1).
  std::int64_t lo = 0;
  std::int64_t hi = m;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (cp_upper(mid, m, delta) <= epsilon) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const std::int64_t k_star = lo;

  // tau_hat is the (k*+1)-th smallest score: the largest threshold whose
  // error count stays <= k*. Every tau feasible => finite cap at max + 1.
  out.tau_hat = k_star >= m ? scores.max_score() + 1.0
                            : scores.sorted()[static_cast<std::size_t>(k_star)];
  out.error_count = scores.count_below(out.tau_hat);
  out.bound_at_tau = cp_upper(out.error_count, m, delta);
  out.feasible = true;
  return out;
}

}  // namespace detail

CalibrationResult ps_calibrate(const ScoreSet& scores, double epsilon,
                               double delta, CalibrationMode mode,
                               const GridSpec& grid) {
  require_probability_open(epsilon, "epsilon");
  require_probability_open(delta, "delta");
  if (mode == CalibrationMode::exact) {
    return detail::exact_calibrate(scores, epsilon, delta, Method::ps);
  }
  return detail::grid_scan_fixed(scores.sorted(), epsilon, delta, grid,
                                 detail::StopPolicy::stop_factor, Method::ps);
}

CalibrationResult ps_c_calibrate(const ScoreSet& scores, double epsilon,
                                 double delta, double b, CalibrationMode mode,
                                 const GridSpec& grid) {
  if (!(b >= 1.0))
    throw std::invalid_argument("ps_c_calibrate: b must be >= 1");
  require_probability_open(epsilon, "epsilon");
  auto result = ps_calibrate(scores, epsilon / b, delta, mode, grid);
  result.method = Method::ps_c;
  return result;
}

Evaluation evaluate(std::span<const double> test_true_scores,
                    std::span<const double> set_sizes, double tau) {
  if (test_true_scores.size() != set_sizes.size())
    throw std::invalid_argument("evaluate: parallel lists differ in length");
  if (test_true_scores.empty())
    throw std::invalid_argument("evaluate: empty test set");
  std::int64_t errors = 0;
  double size_sum = 0.0;
  for (std::size_t i = 0; i < test_true_scores.size(); ++i) {
    if (test_true_scores[i] < tau) ++errors;
    size_sum += set_sizes[i];
  }
  const double count = static_cast<double>(test_true_scores.size());
  return {static_cast<double>(errors) / count, size_sum / count};
}

}  // namespace pacset
