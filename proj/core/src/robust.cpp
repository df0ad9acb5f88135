#include "pacset/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "pacset/binom.hpp"
#include "pacset/rejection.hpp"

namespace pacset {

void UncertaintySet::validate(std::size_t m) const {
  if (intervals.size() != m)
    throw std::invalid_argument(
        "UncertaintySet: interval count must match the calibration set");
  for (const auto& iv : intervals) {
    if (!(iv.lower >= 0.0) || !(iv.lower <= iv.upper))
      throw std::invalid_argument(
          "UncertaintySet: intervals must satisfy 0 <= lower <= upper");
  }
}

std::vector<double> greedy_worst_case(const ScoreSet& scores, double tau,
                                      const UncertaintySet& set) {
  set.validate(scores.size());
  std::vector<double> weights(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool error = scores.original()[i] < tau;
    weights[i] = error ? set.intervals[i].upper : set.intervals[i].lower;
  }
  return weights;
}

double robust_u_rscp(const ScoreSet& scores, double tau,
                     const UncertaintySet& set, double b,
                     std::span<const double> uniforms, double delta_c) {
  const std::vector<double> weights = greedy_worst_case(scores, tau, set);
  const RejectionInput input{scores, weights, b, uniforms};
  return u_rscp(input, tau, delta_c);
}

namespace {

struct RobustState {
  std::int64_t errors_accepted = 0;  // k
  std::int64_t accepted = 0;         // n
};

// Acceptance contribution of example i given its error status.
inline bool accepts(const UncertaintySet& set, std::span<const double> V,
                    double b, std::size_t i, bool error) {
  const double w = error ? set.intervals[i].upper : set.intervals[i].lower;
  return V[i] <= w / b;
}

RobustState state_at(const ScoreSet& scores, const UncertaintySet& set,
                     std::span<const double> V, double b, double tau) {
  RobustState s;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool error = scores.original()[i] < tau;
    if (accepts(set, V, b, i, error)) {
      ++s.accepted;
      if (error) ++s.errors_accepted;
    }
  }
  return s;
}

double bound_for(const RobustState& s, double delta_c) {
  return s.accepted == 0 ? 1.0
                         : cp_upper(s.errors_accepted, s.accepted, delta_c);
}

// Largest grid index with point(j) <= value (see predset.cpp counterpart;
// duplicated locally to keep the detail surface small).
std::optional<std::uint64_t> last_grid_le(const GridSpec& grid, double value) {
  if (grid.point(0) > value) return std::nullopt;
  std::uint64_t lo = 0;
  std::uint64_t hi = 1;
  while (grid.point(hi) <= value) {
    lo = hi;
    if (hi > (std::uint64_t{1} << 62)) break;
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

}  // namespace

CalibrationResult ps_w_calibrate(const ScoreSet& scores,
                                 const UncertaintySet& set, double b,
                                 double epsilon, double delta_c,
                                 const GridSpec& grid, std::uint64_t seed,
                                 ScanPolicy policy) {
  set.validate(scores.size());
  require_probability_open(epsilon, "epsilon");
  require_probability_open(delta_c, "delta_c");
  grid.validate();
  if (!(b > 0.0) || !std::isfinite(b))
    throw std::invalid_argument("ps_w_calibrate: b must be finite and > 0");
  for (const auto& iv : set.intervals) {
    if (std::isinf(iv.upper))
      throw std::invalid_argument(
          "ps_w_calibrate: infinite interval upper bound; the max-IW bound b "
          "cannot cover it");
  }

  const std::vector<double> V = draw_rejection_uniforms(seed, scores.size());
  const std::vector<double>& sorted = scores.sorted();
  const std::vector<std::size_t>& order = scores.order();
  const std::size_t m = scores.size();

  const auto j_cap = last_grid_le(grid, scores.max_score() + 1.0);

  // Current error/acceptance state; the greedy weights and the acceptance
  // set only change when tau passes a distinct score, so the scan walks
  // segments and updates incrementally.
  std::size_t ptr = static_cast<std::size_t>(scores.count_below(grid.point(0)));
  RobustState state =
      state_at(scores, set, V, b, grid.point(0));

  std::optional<std::uint64_t> feasible_j;
  double feasible_bound = 1.0;
  RobustState feasible_state;
  std::vector<TracePoint> trace;
  std::uint64_t j_lo = 0;

  if (j_cap) {
    while (true) {
      const bool more_flips = ptr < m;
      const double next_value =
          more_flips ? sorted[ptr] : std::numeric_limits<double>::infinity();
      std::uint64_t j_hi = *j_cap;
      if (more_flips) {
        if (const auto le = last_grid_le(grid, next_value)) {
          j_hi = std::min(j_hi, *le);
        }
      }

      bool stop = false;
      if (j_hi >= j_lo) {
        const double bound = bound_for(state, delta_c);
        if (policy == ScanPolicy::scan_to_stop)
          trace.push_back({grid.point(j_lo), bound});
        if (bound <= epsilon) {
          feasible_j = j_hi;
          feasible_bound = bound;
          feasible_state = state;
        } else if (policy == ScanPolicy::break_on_violation ||
                   bound > grid.stop_factor * epsilon) {
          stop = true;
        }
        j_lo = j_hi + 1;
      }

      if (stop || !more_flips || j_hi >= *j_cap) break;

      // Flip the tie group at next_value from covered to error.
      const std::size_t group_end = static_cast<std::size_t>(
          std::upper_bound(sorted.begin() + static_cast<std::ptrdiff_t>(ptr),
                           sorted.end(), next_value) -
          sorted.begin());
      for (std::size_t t = ptr; t < group_end; ++t) {
        const std::size_t i = order[t];
        const bool was_accepted = accepts(set, V, b, i, /*error=*/false);
        const bool now_accepted = accepts(set, V, b, i, /*error=*/true);
        state.accepted += (now_accepted ? 1 : 0) - (was_accepted ? 1 : 0);
        state.errors_accepted += now_accepted ? 1 : 0;
      }
      ptr = group_end;
    }
  }

  CalibrationResult out;
  out.method = Method::ps_w;
  out.trace = std::move(trace);
  if (feasible_j) {
    out.tau_hat = grid.point(*feasible_j);
    out.bound_at_tau = feasible_bound;
    out.error_count = feasible_state.errors_accepted;
    out.n_accepted = feasible_state.accepted;
    out.feasible = true;
    return out;
  }
  const RobustState at_zero = state_at(scores, set, V, b, 0.0);
  out.tau_hat = 0.0;
  out.bound_at_tau = bound_for(at_zero, delta_c);
  out.error_count = at_zero.errors_accepted;
  out.n_accepted = at_zero.accepted;
  out.feasible = false;
  return out;
}

}  // namespace pacset
