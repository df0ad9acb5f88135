#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pacset/iw.hpp"
#include "pacset/rng.hpp"
#include "pacset/synth.hpp"
#include "pacset/wsci.hpp"

using namespace pacset;

TEST_CASE("rng streams are deterministic and independent") {
  RngStream a(42, "alpha");
  RngStream b(42, "alpha");
  RngStream c(42, "beta");
  bool all_equal = true;
  bool any_diff_across_labels = false;
  for (int i = 0; i < 64; ++i) {
    const auto x = a.next_u64();
    all_equal = all_equal && x == b.next_u64();
    any_diff_across_labels = any_diff_across_labels || x != c.next_u64();
  }
  CHECK(all_equal);
  CHECK(any_diff_across_labels);
  CHECK(derive_seed(1, "x", 0) != derive_seed(1, "x", 1));
  CHECK(derive_seed(1, "x") != derive_seed(2, "x"));
}

TEST_CASE("rng uniforms stay in range and normals have sane moments") {
  RngStream rng(7, "moments");
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(std::fabs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("two-gaussian exact importance weights") {
  TwoGaussianConfig config;
  CHECK(config.true_b() == 5.0);
  CHECK(config.true_iw(0.0) == 5.0);
  // Analytic ratio of the coordinate-1 marginals at a few points.
  for (double x1 : {-2.0, -0.5, 0.3, 1.7}) {
    const double source_pdf =
        std::exp(-x1 * x1 / (2 * 25.0)) / std::sqrt(2 * M_PI * 25.0);
    const double target_pdf =
        std::exp(-x1 * x1 / 2.0) / std::sqrt(2 * M_PI);
    CHECK(config.true_iw(x1) ==
          doctest::Approx(target_pdf / source_pdf).epsilon(1e-12));
  }
}

TEST_CASE("coordinates past the first cancel from the density ratio") {
  // Full d-dimensional ratio vs the coordinate-1 formula.
  TwoGaussianConfig config;
  config.dim = 4;
  RngStream rng(9, "dims");
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(config.dim);
    x[0] = 5.0 * rng.normal();
    for (std::size_t d = 1; d < config.dim; ++d) {
      x[d] = std::sqrt(config.other_var) * rng.normal();
    }
    double log_source = -x[0] * x[0] / (2 * config.source_var1) -
                        0.5 * std::log(2 * M_PI * config.source_var1);
    double log_target = -x[0] * x[0] / (2 * config.target_var1) -
                        0.5 * std::log(2 * M_PI * config.target_var1);
    for (std::size_t d = 1; d < config.dim; ++d) {
      const double term = -x[d] * x[d] / (2 * config.other_var) -
                          0.5 * std::log(2 * M_PI * config.other_var);
      log_source += term;
      log_target += term;
    }
    CHECK(std::exp(log_target - log_source) ==
          doctest::Approx(config.true_iw(x[0])).epsilon(1e-10));
  }
}

TEST_CASE("mean source importance weight is one") {
  TwoGaussianConfig config;
  RngStream rng(11, "normalization");
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    sum += config.true_iw(5.0 * rng.normal());
  }
  // var of w* under P is 25/7 - 1; 3 sigma of the Monte Carlo mean.
  const double mc_sd = std::sqrt((25.0 / 7.0 - 1.0) / n);
  CHECK(std::fabs(sum / n - 1.0) <= 3.0 * mc_sd);
}

TEST_CASE("domain probabilities and temperature") {
  TwoGaussianConfig config;
  CHECK(config.domain_prob(0.0) == doctest::Approx(1.0 / 6.0));
  CHECK(heuristic_iw(config.domain_prob(0.7)) ==
        doctest::Approx(config.true_iw(0.7)).epsilon(1e-9));
  config.domain_temp = 2.0;
  CHECK(heuristic_iw(config.domain_prob(0.7)) ==
        doctest::Approx(std::pow(config.true_iw(0.7), 2.0)).epsilon(1e-9));
  CHECK(config.heuristic_b() == 25.0);
}

TEST_CASE("synth output is deterministic and well formed") {
  TwoGaussianConfig config;
  config.m = 200;
  config.n = 150;
  config.test_size = 100;
  config.seed = 31;
  const SynthData a = synth_two_gaussian(config);
  const SynthData b = synth_two_gaussian(config);
  REQUIRE(a.source.size() == 200);
  REQUIRE(a.target_domain_probs.size() == 150);
  REQUIRE(a.test.size() == 100);
  CHECK(a.source[17].true_score == b.source[17].true_score);
  CHECK(a.test[99].x1 == b.test[99].x1);
  for (const auto& ex : a.source) {
    CHECK(ex.true_score >= 0.0);
    CHECK(ex.true_score <= 1.0);
    const double s1 = config.label1_score(ex.x1);
    CHECK(ex.true_score == (ex.label == 1 ? s1 : 1.0 - s1));
    CHECK(ex.true_iw <= 5.0);
  }
}

TEST_CASE("synth config validation") {
  TwoGaussianConfig config;
  config.target_var1 = 50.0;  // unbounded IW
  CHECK_THROWS_AS(synth_two_gaussian(config), std::invalid_argument);
  TwoGaussianConfig zero;
  zero.m = 0;
  CHECK_THROWS_AS(synth_two_gaussian(zero), std::invalid_argument);
}

TEST_CASE("synth_set_size counts both labels") {
  CHECK(synth_set_size(0.7, 0.0) == 2.0);
  CHECK(synth_set_size(0.7, 0.5) == 1.0);
  CHECK(synth_set_size(0.5, 0.5) == 2.0);  // ties covered
  CHECK(synth_set_size(0.7, 0.9) == 0.0);
}

TEST_CASE("wsci single calibration point") {
  const std::vector<double> scores{0.7};
  const std::vector<double> weights{1.0};
  CHECK(wsci_calibrate(scores, weights, 0.0, 0.5) == 0.7);
}

TEST_CASE("wsci equal weights reduce to the unweighted quantile") {
  RngStream rng(13, "wsci-uniform");
  std::vector<double> scores(99);
  for (double& s : scores) s = rng.uniform();
  const std::vector<double> weights(99, 1.0);
  const double eps = 0.1;
  const double tau = wsci_calibrate(scores, weights, 1.0, eps);
  // Standard split conformal: the ceil((1-eps)(m+1))-th largest score.
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t rank =
      static_cast<std::size_t>(std::ceil((1 - eps) * (99 + 1)));
  CHECK(tau == sorted[rank - 1]);
}

TEST_CASE("wsci epsilon to zero gives full prediction sets") {
  const std::vector<double> scores{0.2, 0.5, 0.9};
  const std::vector<double> weights{1.0, 1.0, 1.0};
  CHECK(wsci_calibrate(scores, weights, 1.0, 1e-9) == 0.0);
}

TEST_CASE("wsci input validation") {
  const std::vector<double> scores{0.2, 0.5};
  CHECK_THROWS_AS(wsci_calibrate(scores, std::vector<double>{0.0, 0.0}, 1.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(wsci_calibrate(scores, std::vector<double>{1.0}, 1.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(wsci_calibrate(scores, std::vector<double>{1.0, 1.0}, -1.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("wsci weighting shifts the threshold monotonically") {
  // Larger test weight moves more mass to +inf nonconformity, so the
  // threshold can only drop (larger sets).
  RngStream rng(14, "wsci-mono");
  std::vector<double> scores(200), weights(200);
  for (double& s : scores) s = rng.uniform();
  for (double& w : weights) w = 0.1 + rng.uniform();
  const WeightedConformal conformal(scores, weights);
  double prev = 1e18;
  for (double wt : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    const double tau = conformal.threshold(wt, 0.2);
    CHECK(tau <= prev);
    prev = tau;
  }
}
