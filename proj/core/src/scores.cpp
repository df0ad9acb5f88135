#include "pacset/scores.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pacset {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::ps:
      return "ps";
    case Method::ps_c:
      return "ps-c";
    case Method::ps_r:
      return "ps-r";
    case Method::ps_m:
      return "ps-m";
    case Method::ps_w:
      return "ps-w";
    case Method::wsci:
      return "wsci";
  }
  return "?";
}

Method method_from_name(std::string_view name) {
  if (name == "ps") return Method::ps;
  if (name == "ps-c") return Method::ps_c;
  if (name == "ps-r") return Method::ps_r;
  if (name == "ps-m") return Method::ps_m;
  if (name == "ps-w") return Method::ps_w;
  if (name == "wsci") return Method::wsci;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

ScoreSet::ScoreSet(std::vector<double> scores) : original_(std::move(scores)) {
  if (original_.empty())
    throw std::invalid_argument("ScoreSet requires at least one score");
  for (double s : original_) {
    if (!std::isfinite(s))
      throw std::invalid_argument("ScoreSet scores must be finite");
  }
  order_.resize(original_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) {
                     return original_[a] < original_[b];
                   });
  sorted_.reserve(original_.size());
  for (std::size_t i : order_) sorted_.push_back(original_[i]);
}

std::int64_t ScoreSet::count_below(double tau) const {
  return static_cast<std::int64_t>(
      std::lower_bound(sorted_.begin(), sorted_.end(), tau) - sorted_.begin());
}

void GridSpec::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be > 0");
  if (!(stop_factor >= 1.0))
    throw std::invalid_argument("grid stop_factor must be >= 1");
  if (!std::isfinite(start))
    throw std::invalid_argument("grid start must be finite");
}

bool same_numbers(const CalibrationResult& a, const CalibrationResult& b) {
  return std::bit_cast<std::uint64_t>(a.tau_hat) ==
             std::bit_cast<std::uint64_t>(b.tau_hat) &&
         std::bit_cast<std::uint64_t>(a.bound_at_tau) ==
             std::bit_cast<std::uint64_t>(b.bound_at_tau) &&
         a.error_count == b.error_count && a.feasible == b.feasible &&
         a.n_accepted == b.n_accepted;
}

}  // namespace pacset
