#pragma once

#include <cstdint>
#include <optional>

namespace pacset {

// Exact binomial tail machinery: the CDF F(k; m, theta) and the
// Clopper-Pearson bounds obtained by inverting it. Everything downstream
// (the i.i.d., rejection-sampling and robust calibrators) reduces to these
// four functions, so they are kept exact and conservative:
//
//   * the CDF is evaluated through the regularized incomplete beta
//     continued fraction, accurate to ~1e-13 absolute up to m = 1e6;
//   * cp_upper returns the upper end of its final bisection bracket, so
//     F(k; m, returned) <= delta holds for the value actually returned.

// F(k; m, theta) = sum_{i<=k} C(m,i) theta^i (1-theta)^(m-i).
// Requires 0 <= k <= m, m >= 1, theta in [0, 1].
double binom_cdf(std::int64_t k, std::int64_t m, double theta);

// Upper Clopper-Pearson bound: inf{ theta | F(k; m, theta) <= delta } u {1}.
// Equals 1 exactly when k == m. Root found by bisection (width <= 1e-12,
// 200-iteration cap); requires delta in (0, 1).
double cp_upper(std::int64_t k, std::int64_t m, double delta);

// Lower Clopper-Pearson bound, defined through the duality
// cp_lower(k; m, delta) = 1 - cp_upper(m - k; m, delta); equals 0 when k == 0.
double cp_lower(std::int64_t k, std::int64_t m, double delta);

// Largest k with F(k; m, epsilon) <= delta, or nullopt when even k = 0
// fails. Agrees with max{ k | cp_upper(k, m, delta) <= epsilon }.
std::optional<std::int64_t> k_max(std::int64_t m, double epsilon, double delta);

// Argument checks shared across modules; throw std::invalid_argument.
void require_probability(double value, const char* name);        // [0, 1]
void require_probability_open(double value, const char* name);   // (0, 1)

}  // namespace pacset
