#include "pacset/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "pacset/iw.hpp"
#include "pacset/rng.hpp"

namespace pacset {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

SynthExample make_example(const TwoGaussianConfig& config, double x1,
                          RngStream& stream) {
  SynthExample ex;
  ex.x1 = x1;
  const double s1 = config.label1_score(x1);
  ex.label = stream.uniform() < s1 ? 1 : 0;
  ex.true_score = ex.label == 1 ? s1 : 1.0 - s1;
  ex.true_iw = config.true_iw(x1);
  ex.domain_prob = config.domain_prob(x1);
  return ex;
}

}  // namespace

void TwoGaussianConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("two-gaussian: dim must be >= 1");
  if (!(source_var1 > 0.0) || !(target_var1 > 0.0) || !(other_var > 0.0))
    throw std::invalid_argument("two-gaussian: variances must be > 0");
  if (!(target_var1 <= source_var1))
    throw std::invalid_argument(
        "two-gaussian: target_var1 must not exceed source_var1 (the IW would "
        "be unbounded)");
  if (!(domain_temp > 0.0))
    throw std::invalid_argument("two-gaussian: domain_temp must be > 0");
  if (m < 1 || n < 1 || test_size < 1)
    throw std::invalid_argument("two-gaussian: sample counts must be >= 1");
}

double TwoGaussianConfig::true_b() const {
  return std::sqrt(source_var1 / target_var1);
}

double TwoGaussianConfig::heuristic_b() const {
  return std::pow(true_b(), domain_temp);
}

double TwoGaussianConfig::true_iw(double x1) const {
  // Coordinates 2..dim share their marginals and cancel from the ratio.
  const double quad = 0.5 * (1.0 / target_var1 - 1.0 / source_var1);
  return true_b() * std::exp(-quad * x1 * x1);
}

double TwoGaussianConfig::label1_score(double x1) const {
  return sigmoid(label_slope * x1);
}

double TwoGaussianConfig::domain_prob(double x1) const {
  // Oracle: g*(s=1|x) = p/(p+q) = 1/(1+w*). Temperature scales the logit,
  // so the heuristic IW 1/g - 1 becomes w*^temp.
  const double w = true_iw(x1);
  const double heuristic = std::pow(w, domain_temp);
  return clamp_domain_prob(1.0 / (1.0 + heuristic));
}

SynthData synth_two_gaussian(const TwoGaussianConfig& config) {
  config.validate();
  SynthData data;

  const double source_sd = std::sqrt(config.source_var1);
  const double target_sd = std::sqrt(config.target_var1);
  const double other_sd = std::sqrt(config.other_var);

  RngStream source_stream(config.seed, "source");
  data.source.reserve(config.m);
  for (std::size_t i = 0; i < config.m; ++i) {
    const double x1 = source_sd * source_stream.normal();
    for (std::size_t d = 1; d < config.dim; ++d) {
      (void)(other_sd * source_stream.normal());  // remaining coordinates
    }
    data.source.push_back(make_example(config, x1, source_stream));
  }

  RngStream target_stream(config.seed, "target");
  data.target_domain_probs.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const double x1 = target_sd * target_stream.normal();
    for (std::size_t d = 1; d < config.dim; ++d) {
      (void)(other_sd * target_stream.normal());
    }
    data.target_domain_probs.push_back(config.domain_prob(x1));
  }

  RngStream test_stream(config.seed, "test");
  data.test.reserve(config.test_size);
  for (std::size_t i = 0; i < config.test_size; ++i) {
    const double x1 = target_sd * test_stream.normal();
    for (std::size_t d = 1; d < config.dim; ++d) {
      (void)(other_sd * test_stream.normal());
    }
    data.test.push_back(make_example(config, x1, test_stream));
  }
  return data;
}

double synth_set_size(double label1_score, double tau) {
  return (label1_score >= tau ? 1.0 : 0.0) +
         (1.0 - label1_score >= tau ? 1.0 : 0.0);
}

}  // namespace pacset
