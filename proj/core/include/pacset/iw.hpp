#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pacset/robust.hpp"

namespace pacset {

// Importance-weight estimation from a domain classifier: heuristic IWs,
// equal-mass binning over their values, per-bin Clopper-Pearson interval
// bounds on the true IW, the max-IW estimate, and point estimates.

// Domain probabilities enter the system clamped to this range; heuristic_iw
// itself rejects the endpoints.
inline constexpr double kProbClamp = 1e-6;

inline double clamp_domain_prob(double p) {
  if (p < kProbClamp) return kProbClamp;
  if (p > 1.0 - kProbClamp) return 1.0 - kProbClamp;
  return p;
}

// w(x) = 1 / g(s=1|x) - 1; requires prob strictly inside (0, 1).
double heuristic_iw(double domain_prob);

// Raised when an infinite bin upper makes the max-IW estimate undefined.
class UnboundedBError : public std::runtime_error {
 public:
  explicit UnboundedBError(const std::string& what)
      : std::runtime_error(what) {}
};

class DegenerateBinsError : public std::invalid_argument {
 public:
  explicit DegenerateBinsError(const std::string& what)
      : std::invalid_argument(what) {}
};

// K bins over heuristic-IW values. edges has K+1 entries, edges[0] = 0 and
// edges[K] = +inf, strictly ascending. A value equal to an interior edge
// belongs to the lower bin.
struct BinPartition {
  std::vector<double> edges;

  std::size_t bin_count() const { return edges.size() - 1; }
  std::size_t bin_of(double value) const;

  // Interior edges at the empirical quantiles of the source values, so the
  // bins hold equal counts up to ties (ties sink into the lower bin). Throws
  // DegenerateBinsError when fewer than k distinct values exist or ties
  // leave no room for strictly ascending edges.
  static BinPartition equal_mass(std::span<const double> source_values,
                                 std::size_t k);
  // Explicit edges (validated); useful when bins are defined externally.
  static BinPartition from_edges(std::vector<double> edges);
};

// Per-bin source/target occupancy plus the smoothness budget E. All 2K
// Clopper-Pearson intervals downstream are formed at delta_w / (2K).
struct BinEstimates {
  std::vector<std::int64_t> source_counts;
  std::vector<std::int64_t> target_counts;
  std::int64_t m = 0;  // total source examples
  std::int64_t n = 0;  // total target examples
  double smoothness_e = 0.0;
  double delta_w = 0.0;

  double delta_prime() const {
    return delta_w / (2.0 * static_cast<double>(source_counts.size()));
  }
  double source_fraction(std::size_t j) const {
    return static_cast<double>(source_counts[j]) / static_cast<double>(m);
  }
  double target_fraction(std::size_t j) const {
    return static_cast<double>(target_counts[j]) / static_cast<double>(n);
  }

  static BinEstimates from_samples(const BinPartition& bins,
                                   std::span<const double> source_values,
                                   std::span<const double> target_values,
                                   double smoothness_e, double delta_w);
};

struct BinIwBounds {
  std::vector<double> lower;
  std::vector<double> upper;  // +inf when the denominator clamps to zero

  bool has_unbounded() const;
};

enum class IwBoundMode {
  clopper_pearson,  // interval bounds per the binomial inversion
  point_estimate,   // CP bounds replaced by the empirical fractions (and the
                    // smoothness budget ignored): lower = upper = q_hat/p_hat
};

// Per bin j:
//   lower = [cp_lower(target_count, n, d') - E]+ / (cp_upper(source_count, m, d') + E)
//   upper = (cp_upper(target_count, n, d') + E) / [cp_lower(source_count, m, d') - E]+
// with d' = delta_w / (2K); upper is +inf when the denominator clamps to 0.
BinIwBounds estimate_iw_bounds(const BinPartition& bins,
                               const BinEstimates& estimates,
                               IwBoundMode mode = IwBoundMode::clopper_pearson);

// max over bin uppers; throws UnboundedBError naming the offending bin.
double estimate_b(const BinIwBounds& bounds);

// q_hat / p_hat of the bin containing the value; throws on an empty source
// bin (division by zero).
double point_iw(const BinPartition& bins, const BinEstimates& estimates,
                double heuristic_value);

// Each example receives the interval of its containing bin.
std::vector<IwInterval> interval_iw_per_example(
    const BinPartition& bins, const BinIwBounds& bounds,
    std::span<const double> example_heuristic_iws);

// Serialization for reuse across calibrate/evaluate runs: bins, counts,
// bounds and the b estimate in one JSON document (infinite uppers and an
// undefined b are encoded as null).
struct IwModel {
  BinPartition bins;
  BinEstimates estimates;
  BinIwBounds bounds;
};

std::string to_json(const IwModel& model);
IwModel iw_model_from_json(const std::string& text);

}  // namespace pacset
