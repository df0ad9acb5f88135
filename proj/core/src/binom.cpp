#include "pacset/binom.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pacset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// stirlerr(n) = log(n!) - log( sqrt(2*pi*n) (n/e)^n ).
// Table below n = 16, truncated Stirling series above (Loader 2000); keeps
// log-PMF evaluation free of the large-argument lgamma cancellation that
// would otherwise cap CDF accuracy near 1e-8 for m ~ 1e6.
double stirlerr(double n) {
  constexpr double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260,
                   s3 = 1.0 / 1680, s4 = 1.0 / 1188;
  static const std::array<double, 16> table = [] {
    std::array<double, 16> t{};
    t[0] = 0.0;  // unused; PMF edge cases never reach n = 0
    for (int i = 1; i < 16; ++i) {
      const double v = i;
      t[i] = std::lgamma(v + 1.0) - (v + 0.5) * std::log(v) + v -
             0.5 * std::log(kTwoPi);
    }
    return t;
  }();
  if (n < 16.0) return table[static_cast<int>(n)];
  const double nn = n * n;
  if (n > 500.0) return (s0 - s1 / nn) / n;
  if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// bd0(x, np) = x log(x/np) + np - x without cancellation near x ~ np.
double bd0(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    const double v = (x - np) / (x + np);
    const double v2 = v * v;
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    for (int j = 1;; ++j) {
      ej *= v2;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

// Binomial PMF at integer k, stable for large m.
double binom_pmf(std::int64_t k, std::int64_t m, double theta) {
  if (theta == 0.0) return k == 0 ? 1.0 : 0.0;
  if (theta == 1.0) return k == m ? 1.0 : 0.0;
  if (k == 0) return std::exp(static_cast<double>(m) * std::log1p(-theta));
  if (k == m) return std::exp(static_cast<double>(m) * std::log(theta));
  const double n = static_cast<double>(m);
  const double x = static_cast<double>(k);
  const double lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) -
                    bd0(x, n * theta) - bd0(n - x, n * (1.0 - theta));
  const double lf = std::log(kTwoPi) + std::log(x) + std::log1p(-x / n);
  return std::exp(lc - 0.5 * lf);
}

// Lentz's continued fraction for the regularized incomplete beta I_x(a, b)
// (Numerical Recipes form). Caller multiplies by the front factor. Iterated
// in extended precision: the double-precision recurrence loses ~1e-10
// relative accuracy at a, b ~ 5e5 near x = a/(a+b), which would break the
// 1e-12 CDF contract for m up to 1e6.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 5000;
  constexpr long double kEps = 1e-17L;
  constexpr long double kFpMin = 1e-300L;

  const long double qab = static_cast<long double>(a) + b;
  const long double qap = static_cast<long double>(a) + 1.0L;
  const long double qam = static_cast<long double>(a) - 1.0L;
  long double c = 1.0L;
  long double d = 1.0L - qab * x / qap;
  if (fabsl(d) < kFpMin) d = kFpMin;
  d = 1.0L / d;
  long double h = d;
  for (int it = 1; it <= kMaxIter; ++it) {
    const int m2 = 2 * it;
    long double aa = static_cast<long double>(it) * (b - it) * x /
                     ((qam + m2) * (a + m2));
    d = 1.0L + aa * d;
    if (fabsl(d) < kFpMin) d = kFpMin;
    c = 1.0L + aa / c;
    if (fabsl(c) < kFpMin) c = kFpMin;
    d = 1.0L / d;
    h *= d * c;
    aa = -(static_cast<long double>(a) + it) * (qab + it) * x /
         ((a + m2) * (qap + m2));
    d = 1.0L + aa * d;
    if (fabsl(d) < kFpMin) d = kFpMin;
    c = 1.0L + aa / c;
    if (fabsl(c) < kFpMin) c = kFpMin;
    d = 1.0L / d;
    const long double del = d * c;
    h *= del;
    if (fabsl(del - 1.0L) < kEps) return static_cast<double>(h);
  }
  throw std::runtime_error("beta_cf: continued fraction did not converge");
}

void require_count_pair(std::int64_t k, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (k < 0 || k > m)
    throw std::invalid_argument("k must satisfy 0 <= k <= m (k=" +
                                std::to_string(k) + ", m=" +
                                std::to_string(m) + ")");
}

}  // namespace

void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

void require_probability_open(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
}

double binom_cdf(std::int64_t k, std::int64_t m, double theta) {
  require_count_pair(k, m);
  require_probability(theta, "theta");
  if (k == m) return 1.0;
  if (theta == 0.0) return 1.0;
  if (theta == 1.0) return 0.0;
  if (k == 0) return std::exp(static_cast<double>(m) * std::log1p(-theta));

  // F(k; m, theta) = I_{1-theta}(m-k, k+1). The incomplete-beta front factor
  // bt/a collapses to theta * pmf(k) (and bt/b to (1-theta) * pmf(k+1)), so
  // it is computed through the stable PMF instead of a gamma-log difference.
  const double a = static_cast<double>(m - k);
  const double b = static_cast<double>(k + 1);
  const double x = 1.0 - theta;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return theta * binom_pmf(k, m, theta) * beta_cf(a, b, x);
  }
  return 1.0 - (1.0 - theta) * binom_pmf(k + 1, m, theta) * beta_cf(b, a, theta);
}

double cp_upper(std::int64_t k, std::int64_t m, double delta) {
  require_count_pair(k, m);
  require_probability_open(delta, "delta");
  if (k == m) return 1.0;  // F(m; m, theta) = 1 > delta for every theta

  // F is continuous and strictly decreasing in theta for k < m, with
  // F(.,.,0) = 1 > delta and F(.,.,1) = 0 <= delta. The bracket keeps
  // F(hi) <= delta < F(lo); returning hi preserves the guarantee direction.
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binom_cdf(k, m, mid) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double cp_lower(std::int64_t k, std::int64_t m, double delta) {
  require_count_pair(k, m);
  require_probability_open(delta, "delta");
  if (k == 0) return 0.0;
  return 1.0 - cp_upper(m - k, m, delta);
}

std::optional<std::int64_t> k_max(std::int64_t m, double epsilon, double delta) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  require_probability_open(epsilon, "epsilon");
  require_probability_open(delta, "delta");
  if (binom_cdf(0, m, epsilon) > delta) return std::nullopt;

  // F(k; m, epsilon) is non-decreasing in k: binary-search the prefix edge.
  std::int64_t lo = 0;
  std::int64_t hi = m;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (binom_cdf(mid, m, epsilon) <= delta) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace pacset
