#include "pacset/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "pacset/binom.hpp"
#include "pacset/iw.hpp"
#include "pacset/predset.hpp"
#include "pacset/rejection.hpp"
#include "pacset/rng.hpp"
#include "pacset/wsci.hpp"

namespace pacset {

namespace {

std::vector<double> true_scores_of(const std::vector<SynthExample>& examples) {
  std::vector<double> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(ex.true_score);
  return out;
}

std::vector<double> heuristic_iws_of(const std::vector<SynthExample>& examples) {
  std::vector<double> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(heuristic_iw(ex.domain_prob));
  return out;
}

struct IwArtifacts {
  std::vector<double> source_heuristics;
  BinPartition bins;
  BinEstimates estimates;
};

IwArtifacts prepare_iw(const RunConfig& config, const SynthData& calibration,
                       double smoothness_e) {
  IwArtifacts art;
  art.source_heuristics = heuristic_iws_of(calibration.source);
  std::vector<double> target_heuristics;
  target_heuristics.reserve(calibration.target_domain_probs.size());
  for (double p : calibration.target_domain_probs)
    target_heuristics.push_back(heuristic_iw(p));
  art.bins = BinPartition::equal_mass(art.source_heuristics, config.bins);
  art.estimates = BinEstimates::from_samples(
      art.bins, art.source_heuristics, target_heuristics, smoothness_e,
      config.resolved_delta_w());
  return art;
}

double quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values[0];
  const double pos = p * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

}  // namespace

void RunConfig::validate() const {
  require_probability_open(epsilon, "epsilon");
  require_probability_open(delta, "delta");
  const double dc = resolved_delta_c();
  const double dw = resolved_delta_w();
  require_probability_open(dc, "delta_c");
  require_probability_open(dw, "delta_w");
  if (!(dc + dw < 1.0))
    throw std::invalid_argument("delta_c + delta_w must be < 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  if (smoothness_e < 0.0)
    throw std::invalid_argument("smoothness E must be >= 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  grid.validate();
  data.validate();
}

TrialRow run_trial(const RunConfig& config, const SynthData& calibration,
                   std::span<const SynthExample> test,
                   std::size_t trial_index) {
  const ScoreSet scores(true_scores_of(calibration.source));
  const std::uint64_t v_seed = derive_seed(config.seed, "trial", trial_index);

  TrialRow row;
  row.trial = trial_index;

  if (config.method == Method::wsci) {
    // Per-test-point thresholds; the recorded tau_hat is the threshold at
    // the mean importance weight (E_P[w*] = 1) for reporting only.
    std::vector<double> weights;
    weights.reserve(calibration.source.size());
    for (const auto& ex : calibration.source) {
      weights.push_back(config.use_true_iw ? ex.true_iw
                                           : heuristic_iw(ex.domain_prob));
    }
    const WeightedConformal conformal(scores.original(), weights);
    row.tau_hat = conformal.threshold(1.0, config.epsilon);
    row.bound = 1.0;  // certifies no training-conditional bound
    row.n_accepted = static_cast<std::int64_t>(scores.size());
    row.feasible = true;
    std::int64_t errors = 0;
    double size_sum = 0.0;
    for (const auto& ex : test) {
      const double w = config.use_true_iw ? ex.true_iw
                                          : heuristic_iw(ex.domain_prob);
      const double tau = conformal.threshold(w, config.epsilon);
      if (ex.true_score < tau) ++errors;
      size_sum += synth_set_size(config.data.label1_score(ex.x1), tau);
    }
    row.error = static_cast<double>(errors) / static_cast<double>(test.size());
    row.mean_size = size_sum / static_cast<double>(test.size());
    return row;
  }

  CalibrationResult result;
  switch (config.method) {
    case Method::ps:
      result = ps_calibrate(scores, config.epsilon, config.delta);
      break;
    case Method::ps_c: {
      double b = config.data.true_b();
      if (!config.use_true_iw) {
        const IwArtifacts art =
            prepare_iw(config, calibration, config.smoothness_e);
        b = estimate_b(estimate_iw_bounds(art.bins, art.estimates));
      }
      result = ps_c_calibrate(scores, config.epsilon, config.delta, b);
      break;
    }
    case Method::ps_r: {
      std::vector<double> weights;
      weights.reserve(calibration.source.size());
      for (const auto& ex : calibration.source) {
        weights.push_back(config.use_true_iw ? ex.true_iw
                                             : heuristic_iw(ex.domain_prob));
      }
      const double b = config.use_true_iw ? config.data.true_b()
                                          : config.data.heuristic_b();
      result = ps_r_calibrate(scores, weights, b, config.epsilon, config.delta,
                              v_seed);
      break;
    }
    case Method::ps_m: {
      const IwArtifacts art = prepare_iw(config, calibration, 0.0);
      const BinIwBounds point_bounds = estimate_iw_bounds(
          art.bins, art.estimates, IwBoundMode::point_estimate);
      std::vector<double> weights;
      weights.reserve(art.source_heuristics.size());
      for (double v : art.source_heuristics)
        weights.push_back(point_iw(art.bins, art.estimates, v));
      const double b = estimate_b(point_bounds);
      result = ps_r_calibrate(scores, weights, b, config.epsilon, config.delta,
                              v_seed);
      result.method = Method::ps_m;
      break;
    }
    case Method::ps_w: {
      const IwArtifacts art =
          prepare_iw(config, calibration, config.smoothness_e);
      const BinIwBounds bounds = estimate_iw_bounds(art.bins, art.estimates);
      const double b_hat = estimate_b(bounds);
      UncertaintySet set;
      set.intervals =
          interval_iw_per_example(art.bins, bounds, art.source_heuristics);
      set.delta_w = config.resolved_delta_w();
      result = ps_w_calibrate(scores, set, b_hat, config.epsilon,
                              config.resolved_delta_c(), config.grid, v_seed,
                              config.scan);
      break;
    }
    default:
      throw std::invalid_argument("run_trial: unsupported method");
  }

  row.tau_hat = result.tau_hat;
  row.bound = result.bound_at_tau;
  row.n_accepted = result.n_accepted;
  row.feasible = result.feasible;
  std::int64_t errors = 0;
  double size_sum = 0.0;
  for (const auto& ex : test) {
    if (ex.true_score < result.tau_hat) ++errors;
    size_sum += synth_set_size(config.data.label1_score(ex.x1), result.tau_hat);
  }
  row.error = static_cast<double>(errors) / static_cast<double>(test.size());
  row.mean_size = size_sum / static_cast<double>(test.size());
  return row;
}

TrialReport mc_validate(const RunConfig& config) {
  config.validate();

  // Fixed labeled target test set from the master seed.
  TwoGaussianConfig master = config.data;
  master.seed = config.seed;
  master.m = 1;
  master.n = 1;
  const SynthData master_data = synth_two_gaussian(master);
  const std::span<const SynthExample> test(master_data.test);

  TrialReport report;
  report.config = config;
  report.trials.resize(config.trials);

  const auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      TwoGaussianConfig trial_cfg = config.data;
      trial_cfg.seed = derive_seed(config.seed, "trial-data", t);
      trial_cfg.test_size = 1;  // test stream unused; the fixed set is shared
      const SynthData calibration = synth_two_gaussian(trial_cfg);
      report.trials[t] = run_trial(config, calibration, test, t);
    }
  };

  const unsigned thread_count =
      static_cast<unsigned>(std::min<std::size_t>(config.threads, config.trials));
  if (thread_count <= 1) {
    worker(0, config.trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    const std::size_t chunk =
        (config.trials + thread_count - 1) / thread_count;
    for (unsigned i = 0; i < thread_count; ++i) {
      const std::size_t begin = static_cast<std::size_t>(i) * chunk;
      const std::size_t end = std::min(config.trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<double> sizes;
  sizes.reserve(config.trials);
  std::size_t violations = 0;
  double error_sum = 0.0;
  double size_sum = 0.0;
  for (const auto& row : report.trials) {
    if (row.error > config.epsilon) ++violations;
    error_sum += row.error;
    size_sum += row.mean_size;
    sizes.push_back(row.mean_size);
  }
  const double trials = static_cast<double>(config.trials);
  report.aggregate.violation_rate = static_cast<double>(violations) / trials;
  report.aggregate.mean_error = error_sum / trials;
  report.aggregate.mean_size = size_sum / trials;
  report.aggregate.size_p25 = quantile(sizes, 0.25);
  report.aggregate.size_p50 = quantile(sizes, 0.50);
  report.aggregate.size_p75 = quantile(sizes, 0.75);
  return report;
}

}  // namespace pacset
