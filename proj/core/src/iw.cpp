#include "pacset/iw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "pacset/binom.hpp"

namespace pacset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_nonneg(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

double heuristic_iw(double domain_prob) {
  if (!(domain_prob > 0.0 && domain_prob < 1.0))
    throw std::invalid_argument(
        "heuristic_iw: domain probability must lie strictly inside (0, 1)");
  return 1.0 / domain_prob - 1.0;
}

std::size_t BinPartition::bin_of(double value) const {
  // Number of interior edges strictly below value; a value equal to an
  // interior edge lands in the lower bin.
  const auto first = edges.begin() + 1;
  const auto last = edges.end() - 1;
  return static_cast<std::size_t>(std::lower_bound(first, last, value) - first);
}

BinPartition BinPartition::equal_mass(std::span<const double> source_values,
                                      std::size_t k) {
  if (k < 1) throw std::invalid_argument("equal_mass: k must be >= 1");
  if (source_values.size() < k)
    throw DegenerateBinsError("equal_mass: need at least k source values");

  std::vector<double> sorted(source_values.begin(), source_values.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] != sorted[i - 1]) ++distinct;
  }
  if (distinct < k)
    throw DegenerateBinsError("equal_mass: fewer than k distinct values");

  std::vector<double> edges;
  edges.reserve(k + 1);
  edges.push_back(0.0);
  const std::size_t m = sorted.size();
  for (std::size_t t = 1; t < k; ++t) {
    // Cut after the floor(t*m/k)-th smallest value; values tied with the
    // edge stay in the lower bin, so occupancy is equal up to ties.
    const std::size_t pos = t * m / k;
    double candidate = sorted[pos - 1];
    if (candidate <= edges.back()) {
      // Ties collapsed this quantile onto the previous edge; advance to the
      // next distinct value to keep the edges strictly ascending.
      const auto next =
          std::upper_bound(sorted.begin(), sorted.end(), edges.back());
      if (next == sorted.end())
        throw DegenerateBinsError(
            "equal_mass: ties leave fewer than k distinct bin edges");
      candidate = *next;
    }
    edges.push_back(candidate);
  }
  edges.push_back(kInf);
  return from_edges(std::move(edges));
}

BinPartition BinPartition::from_edges(std::vector<double> edges) {
  if (edges.size() < 2)
    throw std::invalid_argument("BinPartition: need at least two edges");
  if (edges.front() != 0.0)
    throw std::invalid_argument("BinPartition: edges[0] must be 0");
  if (!std::isinf(edges.back()))
    throw std::invalid_argument("BinPartition: edges[K] must be +inf");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i - 1] < edges[i]))
      throw DegenerateBinsError("BinPartition: edges must ascend strictly");
  }
  BinPartition out;
  out.edges = std::move(edges);
  return out;
}

BinEstimates BinEstimates::from_samples(const BinPartition& bins,
                                        std::span<const double> source_values,
                                        std::span<const double> target_values,
                                        double smoothness_e, double delta_w) {
  if (smoothness_e < 0.0)
    throw std::invalid_argument("smoothness E must be >= 0");
  require_probability_open(delta_w, "delta_w");
  if (source_values.empty() || target_values.empty())
    throw std::invalid_argument("bin estimates need source and target values");

  BinEstimates est;
  const std::size_t k = bins.bin_count();
  est.source_counts.assign(k, 0);
  est.target_counts.assign(k, 0);
  for (double v : source_values) ++est.source_counts[bins.bin_of(v)];
  for (double v : target_values) ++est.target_counts[bins.bin_of(v)];
  est.m = static_cast<std::int64_t>(source_values.size());
  est.n = static_cast<std::int64_t>(target_values.size());
  est.smoothness_e = smoothness_e;
  est.delta_w = delta_w;
  return est;
}

bool BinIwBounds::has_unbounded() const {
  return std::any_of(upper.begin(), upper.end(),
                     [](double u) { return std::isinf(u); });
}

BinIwBounds estimate_iw_bounds(const BinPartition& bins,
                               const BinEstimates& estimates,
                               IwBoundMode mode) {
  const std::size_t k = bins.bin_count();
  if (estimates.source_counts.size() != k || estimates.target_counts.size() != k)
    throw std::invalid_argument("estimate_iw_bounds: bin count mismatch");

  BinIwBounds out;
  out.lower.resize(k);
  out.upper.resize(k);
  const double e = mode == IwBoundMode::point_estimate ? 0.0
                                                       : estimates.smoothness_e;
  const double dp = estimates.delta_prime();
  for (std::size_t j = 0; j < k; ++j) {
    double p_lo, p_hi, q_lo, q_hi;
    if (mode == IwBoundMode::point_estimate) {
      p_lo = p_hi = estimates.source_fraction(j);
      q_lo = q_hi = estimates.target_fraction(j);
    } else {
      p_lo = cp_lower(estimates.source_counts[j], estimates.m, dp);
      p_hi = cp_upper(estimates.source_counts[j], estimates.m, dp);
      q_lo = cp_lower(estimates.target_counts[j], estimates.n, dp);
      q_hi = cp_upper(estimates.target_counts[j], estimates.n, dp);
    }
    const double denom_lower = p_hi + e;
    out.lower[j] = denom_lower > 0.0 ? clamp_nonneg(q_lo - e) / denom_lower : 0.0;
    const double denom_upper = clamp_nonneg(p_lo - e);
    out.upper[j] = denom_upper > 0.0 ? (q_hi + e) / denom_upper : kInf;
  }
  return out;
}

double estimate_b(const BinIwBounds& bounds) {
  if (bounds.upper.empty())
    throw std::invalid_argument("estimate_b: need at least one bin");
  double best = 0.0;
  for (std::size_t j = 0; j < bounds.upper.size(); ++j) {
    if (std::isinf(bounds.upper[j]))
      throw UnboundedBError(
          "estimate_b: bin " + std::to_string(j) +
          " has an unbounded IW upper limit; use larger samples, fewer bins, "
          "or a smaller smoothness E");
    best = std::max(best, bounds.upper[j]);
  }
  return best;
}

double point_iw(const BinPartition& bins, const BinEstimates& estimates,
                double heuristic_value) {
  const std::size_t j = bins.bin_of(heuristic_value);
  if (estimates.source_counts[j] == 0)
    throw std::invalid_argument("point_iw: bin " + std::to_string(j) +
                                " holds no source examples");
  return estimates.target_fraction(j) / estimates.source_fraction(j);
}

std::vector<IwInterval> interval_iw_per_example(
    const BinPartition& bins, const BinIwBounds& bounds,
    std::span<const double> example_heuristic_iws) {
  std::vector<IwInterval> out;
  out.reserve(example_heuristic_iws.size());
  for (double v : example_heuristic_iws) {
    const std::size_t j = bins.bin_of(v);
    out.push_back({bounds.lower[j], bounds.upper[j]});
  }
  return out;
}

std::string to_json(const IwModel& model) {
  nlohmann::ordered_json doc;
  auto& bins = doc["bins"];
  bins["count"] = model.bins.bin_count();
  auto edges = nlohmann::ordered_json::array();
  for (double e : model.bins.edges) {
    if (std::isinf(e)) {
      edges.push_back(nullptr);
    } else {
      edges.push_back(e);
    }
  }
  bins["edges"] = std::move(edges);

  auto& est = doc["estimates"];
  est["m"] = model.estimates.m;
  est["n"] = model.estimates.n;
  est["delta_w"] = model.estimates.delta_w;
  est["smoothness_e"] = model.estimates.smoothness_e;
  est["source_counts"] = model.estimates.source_counts;
  est["target_counts"] = model.estimates.target_counts;

  auto& bounds = doc["bounds"];
  bounds["lower"] = model.bounds.lower;
  auto upper = nlohmann::ordered_json::array();
  for (double u : model.bounds.upper) {
    if (std::isinf(u)) {
      upper.push_back(nullptr);
    } else {
      upper.push_back(u);
    }
  }
  bounds["upper"] = std::move(upper);

  if (model.bounds.has_unbounded()) {
    doc["b_hat"] = nullptr;
  } else {
    doc["b_hat"] = estimate_b(model.bounds);
  }
  return doc.dump(2) + "\n";
}

IwModel iw_model_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  IwModel model;

  std::vector<double> edges;
  for (const auto& e : doc.at("bins").at("edges")) {
    edges.push_back(e.is_null() ? kInf : e.get<double>());
  }
  model.bins = BinPartition::from_edges(std::move(edges));

  const auto& est = doc.at("estimates");
  model.estimates.m = est.at("m").get<std::int64_t>();
  model.estimates.n = est.at("n").get<std::int64_t>();
  model.estimates.delta_w = est.at("delta_w").get<double>();
  model.estimates.smoothness_e = est.at("smoothness_e").get<double>();
  model.estimates.source_counts =
      est.at("source_counts").get<std::vector<std::int64_t>>();
  model.estimates.target_counts =
      est.at("target_counts").get<std::vector<std::int64_t>>();

  const auto& bounds = doc.at("bounds");
  model.bounds.lower = bounds.at("lower").get<std::vector<double>>();
  for (const auto& u : bounds.at("upper")) {
    model.bounds.upper.push_back(u.is_null() ? kInf : u.get<double>());
  }
  return model;
}

}  // namespace pacset
