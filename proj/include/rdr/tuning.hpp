#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "rdr/model.hpp"
#include "rdr/profiles.hpp"
#include "rdr/random.hpp"

namespace rdr {

/// Lower convex hull of the points (t_i, nu_i).
struct HullResult {
  VarianceProfile nu_prime;
  /// Hull vertices, ascending; always contains 0 and d.
  std::vector<std::size_t> support;
  /// theta_i = (nu'_{i+1} - nu'_i) / (t_{i+1} - t_i), increasing in i.
  std::vector<double> theta;
};

/// Andrew's monotone chain restricted to the lower hull. O(d). nu need not be
/// decreasing; the hull always is.
HullResult lower_hull(const CostProfile& t, const VarianceProfile& nu);

struct OptimalQ {
  RedrawDistribution q;
  double r;
};

/// argmin_q R(q; t, nu) with q_i = sqrt(theta_i / theta_0) from the hull
/// slopes, and R* = (sum_i sqrt((nu'_i - nu'_{i+1}) (t_{i+1} - t_i)))^2.
/// Requires nu_0, ..., nu_{d-1} > 0.
OptimalQ optimal_q(const CostProfile& t, const VarianceProfile& nu);

struct CEstimate {
  double estimate;
  double standard_error;
};

/// Control-variate estimator of C(i):
/// mean of (f(U) - f(U_pre, U'_tail)) * (f(U'_pre, U_tail) - f(U'_pre, U''_tail)).
CEstimate estimate_c(PrefixModel& model, std::size_t i, std::size_t samples, Stream& rng);

/// Plain covariance estimator cov(f(U), f(U'_pre, U_tail)), for comparison.
CEstimate estimate_c_covariance(PrefixModel& model, std::size_t i, std::size_t samples, Stream& rng);

struct TunedPlan {
  RedrawDistribution q;
  /// Expected iteration cost of q.
  double expected_cost;
  /// R(q; t, nu_hull).
  double predicted_r;
  /// Repaired proxy nu after Steps 2-3.
  VarianceProfile nu_proxy;
  VarianceProfile nu_hull;
  /// Raw C estimates at i with i+1 a power of two.
  std::map<std::size_t, CEstimate> c_estimates;
  /// Cost spent in C estimation, in input-draw units.
  double tuning_cost;
};

/// Estimates C at i = 2^k - 1, builds the proxy nu, repairs it to be
/// decreasing, takes the optimal q of its hull and floors it at
/// min(1, T / (t_{i+1} ln(t_d / t_1))). Indices are estimated in parallel,
/// each on its own substream of `rng`, so the result does not depend on
/// `threads`. Throws NumericError when the estimated variance is not positive.
TunedPlan auto_tune(const PrefixModel& model, const CostProfile& t, Stream& rng, std::size_t samples = 1000,
                    int threads = 0);

/// Exhaustive search over decreasing q on the geometric grid
/// {r^k : 0 <= k < resolution}, r^{resolution-1} = 1e-3, with q_0 = 1.
/// d <= 6, resolution <= 50.
OptimalQ grid_search_q(const CostProfile& t, const VarianceProfile& nu, std::size_t resolution);

}  // namespace rdr
