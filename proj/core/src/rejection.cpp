#include "pacset/rejection.hpp"

#include <cmath>
#include <stdexcept>

#include "pacset/binom.hpp"
#include "pacset/rng.hpp"

namespace pacset {

void validate(const RejectionInput& input) {
  const std::size_t m = input.scores.size();
  if (input.weights.size() != m || input.uniforms.size() != m)
    throw std::invalid_argument(
        "rejection: weights and uniforms must match the score count");
  if (!(input.b > 0.0)) throw std::invalid_argument("rejection: b must be > 0");
  for (double w : input.weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("rejection: weights must be finite and >= 0");
  }
  for (double v : input.uniforms) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("rejection: uniforms must lie in [0, 1]");
  }
}

AcceptedSet rejection_sample(const RejectionInput& input) {
  validate(input);
  AcceptedSet out;
  out.indices.reserve(input.scores.size());
  for (std::size_t i = 0; i < input.scores.size(); ++i) {
    if (input.weights[i] > input.b) ++out.n_weight_over_bound;
    if (input.uniforms[i] <= input.weights[i] / input.b)
      out.indices.push_back(i);
  }
  return out;
}

double u_rscp(const RejectionInput& input, double tau, double delta) {
  const AcceptedSet accepted = rejection_sample(input);
  if (accepted.n() == 0) return 1.0;
  std::int64_t errors = 0;
  for (std::size_t i : accepted.indices) {
    if (input.scores.original()[i] < tau) ++errors;
  }
  return cp_upper(errors, static_cast<std::int64_t>(accepted.n()), delta);
}

std::vector<double> draw_rejection_uniforms(std::uint64_t seed, std::size_t m) {
  RngStream stream(seed, "rejection");
  std::vector<double> uniforms(m);
  for (double& v : uniforms) v = stream.uniform();
  return uniforms;
}

CalibrationResult ps_r_calibrate(const ScoreSet& scores,
                                 std::span<const double> weights, double b,
                                 double epsilon, double delta,
                                 std::uint64_t seed, CalibrationMode mode,
                                 const GridSpec& grid) {
  require_probability_open(epsilon, "epsilon");
  require_probability_open(delta, "delta");
  const std::vector<double> uniforms =
      draw_rejection_uniforms(seed, scores.size());
  const RejectionInput input{scores, weights, b, uniforms};
  const AcceptedSet accepted = rejection_sample(input);

  if (accepted.n() == 0) {
    CalibrationResult out;
    out.tau_hat = 0.0;
    out.bound_at_tau = 1.0;  // vacuous sample
    out.error_count = 0;
    out.feasible = false;
    out.method = Method::ps_r;
    out.n_accepted = 0;
    return out;
  }

  std::vector<double> accepted_scores;
  accepted_scores.reserve(accepted.n());
  for (std::size_t i : accepted.indices)
    accepted_scores.push_back(scores.original()[i]);
  const ScoreSet subsample(std::move(accepted_scores));

  CalibrationResult out =
      mode == CalibrationMode::exact
          ? detail::exact_calibrate(subsample, epsilon, delta, Method::ps_r)
          : detail::grid_scan_fixed(subsample.sorted(), epsilon, delta, grid,
                                    detail::StopPolicy::first_violation,
                                    Method::ps_r);
  out.method = Method::ps_r;
  return out;
}

}  // namespace pacset
