#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pacset/binom.hpp"
#include "pacset/predset.hpp"
#include "pacset/rng.hpp"

using namespace pacset;

namespace {

ScoreSet ladder10() {
  return ScoreSet({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
}

ScoreSet random_scores(RngStream& rng, std::size_t m, double hi = 1.0) {
  std::vector<double> s(m);
  for (double& v : s) v = hi * rng.uniform();
  return ScoreSet(std::move(s));
}

}  // namespace

TEST_CASE("empirical_error_count and tie handling") {
  const ScoreSet scores({0.2, 0.5, 0.9});
  CHECK(empirical_error_count(scores, 0.0) == 0);
  CHECK(empirical_error_count(scores, 0.5) == 1);  // 0.5 itself is covered
  CHECK(empirical_error_count(scores, 1.0) == 3);
  double prev = -1;
  for (double tau : {0.0, 0.1, 0.2, 0.21, 0.5, 0.89, 0.9, 0.91, 2.0}) {
    const double count = static_cast<double>(empirical_error_count(scores, tau));
    CHECK(count >= prev);
    prev = count;
  }
}

TEST_CASE("ScoreSet validation and ordering") {
  CHECK_THROWS_AS(ScoreSet({}), std::invalid_argument);
  CHECK_THROWS_AS(ScoreSet({0.1, std::nan("")}), std::invalid_argument);
  const ScoreSet s({0.5, 0.1, 0.5, 0.3});
  CHECK(s.sorted() == std::vector<double>({0.1, 0.3, 0.5, 0.5}));
  CHECK(s.original()[s.order()[0]] == 0.1);
  CHECK(s.order()[2] == 0);  // stable: first 0.5 keeps original position 0
}

TEST_CASE("u_cp values") {
  CHECK(std::fabs(u_cp(ladder10(), 0.05, 0.05) - 0.2588655508930523) < 1e-10);
  CHECK(u_cp(ladder10(), 1.5, 0.05) == 1.0);  // tau above all scores, k = m
  RngStream rng(5, "ucp");
  const ScoreSet scores = random_scores(rng, 100);
  const double tau = scores.sorted()[5];  // exactly 5 scores strictly below
  CHECK(std::fabs(u_cp(scores, tau, 0.1) - 0.09077146961407018) < 1e-9);
}

TEST_CASE("ps_calibrate exact mode on the ladder") {
  const auto result = ps_calibrate(ladder10(), 0.5, 0.05);
  CHECK(result.feasible);
  CHECK(result.tau_hat == 0.2);  // k* = 1, second order statistic
  CHECK(result.error_count == 1);
  CHECK(result.bound_at_tau <= 0.5);
  CHECK(result.n_accepted == 10);
  CHECK(result.method == Method::ps);
}

TEST_CASE("ps_calibrate infeasible returns the trivial solution") {
  RngStream rng(6, "infeasible");
  const ScoreSet scores = random_scores(rng, 5);
  const auto result = ps_calibrate(scores, 0.001, 0.001);
  CHECK_FALSE(result.feasible);
  CHECK(result.tau_hat == 0.0);
  CHECK(result.bound_at_tau > 0.001);
}

TEST_CASE("ps_calibrate with all scores equal") {
  const ScoreSet scores(std::vector<double>(20, 0.7));
  const auto result = ps_calibrate(scores, 0.3, 0.1);
  REQUIRE(result.feasible);
  CHECK(result.tau_hat <= 0.7);
  CHECK(result.error_count == 0);
}

TEST_CASE("ps_calibrate grid mode agrees with exact to one step") {
  RngStream rng(7, "grid-agree");
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 5 + rng.uniform_index(496);
    const ScoreSet scores = random_scores(rng, m);
    const double eps = 0.05 + 0.4 * rng.uniform();
    const double delta = 0.02 + 0.3 * rng.uniform();
    GridSpec grid;
    grid.step = 1e-3 + 9e-3 * rng.uniform();
    const auto exact = ps_calibrate(scores, eps, delta);
    const auto gridr =
        ps_calibrate(scores, eps, delta, CalibrationMode::grid, grid);
    CHECK(exact.feasible == gridr.feasible);
    if (exact.feasible) {
      CHECK(std::fabs(exact.tau_hat - gridr.tau_hat) <= grid.step);
      CHECK(gridr.bound_at_tau <= eps);
    }
  }
}

TEST_CASE("ps_calibrate fine default grid on a narrow score range") {
  std::vector<double> scores;
  RngStream rng(8, "fine");
  for (int i = 0; i < 50; ++i) scores.push_back(0.01 * rng.uniform());
  const ScoreSet set(std::move(scores));
  const auto exact = ps_calibrate(set, 0.3, 0.1);
  const auto gridr = ps_calibrate(set, 0.3, 0.1, CalibrationMode::grid, {});
  REQUIRE(exact.feasible);
  REQUIRE(gridr.feasible);
  CHECK(std::fabs(exact.tau_hat - gridr.tau_hat) <= 1e-7);
}

TEST_CASE("feasible results satisfy the bound as computed") {
  RngStream rng(9, "bound-holds");
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 10 + rng.uniform_index(200);
    const ScoreSet scores = random_scores(rng, m);
    const double eps = 0.05 + 0.4 * rng.uniform();
    const double delta = 0.02 + 0.2 * rng.uniform();
    const auto result = ps_calibrate(scores, eps, delta);
    if (result.feasible) {
      CHECK(u_cp(scores, result.tau_hat, delta) <= eps);
      CHECK(result.bound_at_tau <= eps);
    }
  }
}

TEST_CASE("ps_c_calibrate reductions and validation") {
  RngStream rng(10, "psc");
  const ScoreSet scores = random_scores(rng, 80);
  const auto plain = ps_calibrate(scores, 0.1, 0.05);
  const auto with_b1 = ps_c_calibrate(scores, 0.1, 0.05, 1.0);
  CHECK(same_numbers(plain, with_b1));
  CHECK(with_b1.method == Method::ps_c);

  const auto shifted = ps_c_calibrate(scores, 0.1, 0.05, 10.0);
  const auto direct = ps_calibrate(scores, 0.01, 0.05);
  CHECK(same_numbers(shifted, direct));

  // b large enough that epsilon / b admits no k: conservative collapse.
  const auto collapsed = ps_c_calibrate(ScoreSet(std::vector<double>(5, 0.5)),
                                        0.1, 0.001, 1000.0);
  CHECK_FALSE(collapsed.feasible);
  CHECK(collapsed.tau_hat == 0.0);

  CHECK_THROWS_AS(ps_c_calibrate(scores, 0.1, 0.05, 0.5),
                  std::invalid_argument);
}

TEST_CASE("evaluate metrics") {
  const std::vector<double> truths{0.2, 0.5, 0.9};
  const std::vector<double> sizes{3.0, 2.0, 1.0};
  const auto at_zero = evaluate(truths, sizes, 0.0);
  CHECK(at_zero.error_rate == 0.0);
  CHECK(at_zero.mean_size == 2.0);
  const auto above = evaluate(truths, sizes, 1.5);
  CHECK(above.error_rate == 1.0);
  const auto mid = evaluate(truths, sizes, 0.5);
  CHECK(mid.error_rate == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(evaluate(truths, std::vector<double>{1.0}, 0.5),
                  std::invalid_argument);
}

TEST_CASE("monotone tradeoff between error and size") {
  RngStream rng(11, "tradeoff");
  const ScoreSet scores = random_scores(rng, 64);
  std::vector<double> sizes(64);
  double prev_count = -1.0;
  double prev_size = 1e18;
  for (double tau = 0.0; tau <= 1.05; tau += 0.05) {
    const double count = static_cast<double>(empirical_error_count(scores, tau));
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      sizes[i] = scores.original()[i] >= tau ? 1.0 : 0.0;
    }
    const auto eval = evaluate(scores.original(), sizes, tau);
    CHECK(count >= prev_count);
    CHECK(eval.mean_size <= prev_size);
    prev_count = count;
    prev_size = eval.mean_size;
  }
}

TEST_CASE("PAC coverage of the calibrated threshold on uniform scores") {
  // Scores ~ U(0,1) make the true error of C_tau equal tau itself.
  const double eps = 0.1, delta = 0.1;
  const int trials = 2000;
  const std::size_t m = 500;
  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(static_cast<std::uint64_t>(t), "pac-coverage");
    std::vector<double> scores(m);
    for (double& s : scores) s = rng.uniform();
    const auto result = ps_calibrate(ScoreSet(std::move(scores)), eps, delta);
    if (result.tau_hat > eps) ++violations;
  }
  const double rate = static_cast<double>(violations) / trials;
  CHECK(rate <= delta + 3.0 * std::sqrt(delta * (1 - delta) / trials));
}
