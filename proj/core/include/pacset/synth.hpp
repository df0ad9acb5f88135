#pragma once

#include <cstdint>
#include <vector>

namespace pacset {

// Synthetic rate shift between two centered Gaussians that differ only in
// the first coordinate's variance ("flat" source, "tall" target). Labels
// follow p(y=1|x) = sigmoid(label_slope * x1), the score function is the
// Bayes conditional p(y|x), and the true importance weight is the exact
// density ratio, which depends on x1 alone:
//   w*(x) = sqrt(source_var1 / target_var1)
//           * exp(-x1^2/2 * (1/target_var1 - 1/source_var1)),
// maximized at x1 = 0, so b = sqrt(source_var1 / target_var1).
struct TwoGaussianConfig {
  std::size_t dim = 8;
  double source_var1 = 25.0;
  double other_var = 0.1;
  double target_var1 = 1.0;
  double label_slope = 5.0;
  std::size_t m = 2000;        // labeled source calibration examples
  std::size_t n = 2000;        // unlabeled target examples
  std::size_t test_size = 20000;
  // Sharpens the emitted domain probabilities like an overconfident
  // source/target classifier would: logit is multiplied by this factor, so
  // the heuristic IW becomes w*^temp. 1 = oracle classifier.
  double domain_temp = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  double true_b() const;            // sup of the true IW
  double heuristic_b() const;       // sup of the heuristic IW (= true_b^temp)
  double true_iw(double x1) const;
  double label1_score(double x1) const;  // p(y=1 | x)
  double domain_prob(double x1) const;   // emitted g(s=1|x), clamped
};

struct SynthExample {
  double x1 = 0.0;
  int label = 0;
  double true_score = 0.0;   // f(x, y_true)
  double true_iw = 0.0;
  double domain_prob = 0.0;  // temperature-adjusted, clamped
};

struct SynthData {
  std::vector<SynthExample> source;        // labeled, size m
  std::vector<double> target_domain_probs; // unlabeled target, size n
  std::vector<SynthExample> test;          // labeled target test set
};

// Deterministic for a fixed config; source/target/test each draw from their
// own named stream of config.seed.
SynthData synth_two_gaussian(const TwoGaussianConfig& config);

// Prediction-set size at tau for one example of the binary synthetic task.
double synth_set_size(double label1_score, double tau);

}  // namespace pacset
