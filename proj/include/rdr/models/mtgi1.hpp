#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rdr/models/gtd1.hpp"
#include "rdr/random.hpp"

namespace rdr {

struct MtGi1Params {
  double theta = 1e4;
  double lambda_star = 1.25;
  /// Number of intervals; 0 selects ceil(theta).
  std::size_t d = 0;
  std::function<double(double)> rate = SinusoidalRate{};
  /// Pareto service, P(S >= z) = (1 + z / alpha)^-3, mean alpha / 2.
  double pareto_alpha = 2.0;
  /// Output 1{W_theta > threshold} when set, W_theta otherwise.
  bool threshold_output = true;
  double threshold = 1.0;
  std::size_t period = 100;
};

struct Arrival {
  double time;
  double service;

  bool operator==(const Arrival&) const = default;
};

/// Arrivals in one interval (i theta/d, (i+1) theta/d], in time order.
struct IntervalArrivals {
  std::vector<Arrival> arrivals;

  bool operator==(const IntervalArrivals&) const = default;
};

/// M_t/GI/1 queue observed through its residual work X_i = W_{i theta/d}.
/// Arrivals are generated by thinning a rate-lambda* Poisson process.
class MtGi1Chain {
 public:
  using State = double;
  using Driver = IntervalArrivals;

  explicit MtGi1Chain(MtGi1Params params);

  std::size_t horizon() const noexcept { return d_; }
  State initial_state() const noexcept { return 0.0; }
  void draw(std::size_t step, Stream& rng, Driver& y);
  State transition(std::size_t step, State w, const Driver& y) const noexcept;
  double output(State w) const noexcept {
    return p_.threshold_output ? (w > p_.threshold ? 1.0 : 0.0) : w;
  }
  std::string name() const { return "mtgi1"; }
  std::size_t default_period() const noexcept { return p_.period; }

  double interval_length() const noexcept { return h_; }
  double pareto_service(double u) const;

  const MtGi1Params& params() const noexcept { return p_; }

 private:
  MtGi1Params p_;
  std::size_t d_;
  double h_;
};

/// Workload after an interval [start, end] given its arrivals: each arrival at
/// time a with service S sets W <- S + (W - (a - prev))^+, and the remaining
/// gap drains W <- (W - (end - prev))^+.
double advance_workload(double w, double start, double end, const std::vector<Arrival>& arrivals) noexcept;

}  // namespace rdr
