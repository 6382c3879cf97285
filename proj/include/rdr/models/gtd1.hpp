#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rdr/random.hpp"

namespace rdr {

/// lambda(s) = base + amplitude * cos(2 pi s / period).
struct SinusoidalRate {
  double base = 0.75;
  double amplitude = 0.5;
  double period = 100.0;

  double operator()(double s) const;
  double max() const { return base + (amplitude < 0 ? -amplitude : amplitude); }
};

struct Gtd1Params {
  std::size_t d = 10000;
  /// lambda_i for arrival epoch i >= 1.
  std::function<double(std::size_t)> rate = SinusoidalRate{};
  /// Output 1{X_d > threshold} when set, X_d otherwise.
  bool threshold_output = false;
  double threshold = 0.0;
  std::size_t period = 100;
};

/// Discrete-time single-server queue with unit service: X_{i+1} = (X_i + Y_i)^+,
/// Y_i = A_{i+1} - 1, A_i ~ Poisson(lambda_i), starting empty.
class Gtd1Chain {
 public:
  using State = std::int64_t;
  using Driver = std::int64_t;

  explicit Gtd1Chain(const Gtd1Params& params);

  std::size_t horizon() const noexcept { return d_; }
  State initial_state() const noexcept { return 0; }
  void draw(std::size_t step, Stream& rng, Driver& y) { y = rng.poisson(arrivals_[step]) - 1; }
  State transition(std::size_t, State x, Driver y) const noexcept { return x + y > 0 ? x + y : 0; }
  double output(State x) const noexcept {
    return threshold_output_ ? (static_cast<double>(x) > threshold_ ? 1.0 : 0.0) : static_cast<double>(x);
  }
  std::string name() const { return "gtd1"; }
  std::size_t default_period() const noexcept { return period_; }

  /// Mean of A_{step+1}.
  double arrival_rate(std::size_t step) const { return arrivals_[step].mean(); }

 private:
  std::size_t d_;
  std::vector<std::poisson_distribution<int>::param_type> arrivals_;
  bool threshold_output_;
  double threshold_;
  std::size_t period_;
};

}  // namespace rdr
