#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "rdr/model.hpp"
#include "rdr/profiles.hpp"
#include "rdr/random.hpp"

namespace rdr {

/// One step of the estimator loop.
struct IterationOutcome {
  double value;
  std::size_t redraw_size;
  double cost_increment;
};

struct EstimateResult {
  double estimate = 0.0;
  std::size_t iterations = 0;
  double total_cost = 0.0;
  /// Filled only when requested.
  std::vector<double> values;
};

/// Inverse-CDF draw of N with P(N > i) = q_i: the unique N in [1, d] with
/// q_N <= u < q_{N-1}. O(log d).
std::size_t sample_redraw_size(const RedrawDistribution& q, double u);

/// T = sum_i q_i (t_{i+1} - t_i), the expected cost of one iteration after the first.
double expected_iteration_cost(const RedrawDistribution& q, const CostProfile& t);

/// sum_i (nu_i - nu_{i+1}) / q_i. With nu = nu*, this is the limit of n var(f_n).
double variance_bound_rhs(const RedrawDistribution& q, const VarianceProfile& nu);

/// R(q; t, nu) = expected_iteration_cost(q, t) * variance_bound_rhs(q, nu).
double work_variance_product(const RedrawDistribution& q, const CostProfile& t, const VarianceProfile& nu);

/// nu*_0 = C_0, nu*_i = 2 C_i for i >= 1. The result is not necessarily decreasing.
VarianceProfile nu_star_from_c(const VarianceProfile& c);

// Explicit redraw distributions.

/// q_i = (i+1)^((gamma-1)/2), gamma < 0.
RedrawDistribution power_law_q(double gamma, std::size_t d);
/// q_i = sqrt(theta_i / theta_0), theta_i = (nu_{i+1} - nu_i) / (w_{i+1} - w_i), which must increase.
RedrawDistribution convex_profile_q(const CostProfile& bound_cost, const VarianceProfile& nu);
/// q_i = sqrt(t_1 C_i / (t_{i+1} C_0)), requires C_{d-1} > 0.
RedrawDistribution sqrt_c_q(const CostProfile& t, const VarianceProfile& c);
/// q_i = t_1 / t_{i+1}.
RedrawDistribution log_optimal_q(const CostProfile& t);
/// q_i = 1 / (i+1).
RedrawDistribution harmonic_q(std::size_t d);

struct PowerLaw {
  double gamma;
};
struct ConvexProfile {
  CostProfile bound_cost;
  VarianceProfile nu;
};
struct SqrtC {
  CostProfile t;
  VarianceProfile c;
};
struct LogOptimal {
  CostProfile t;
};
struct Harmonic {};

using QFamily = std::variant<PowerLaw, ConvexProfile, SqrtC, LogOptimal, Harmonic>;

RedrawDistribution explicit_q(const QFamily& family, std::size_t d);

/// n = 1 + round(budget_multiplier * d / T), at least 2.
std::size_t choose_n(std::size_t d, double expected_cost, double budget_multiplier = 10.0);

/// Runs n iterations on `model`, drawing the first copy in full and then
/// redrawing `next_size(k)` leading inputs before iteration k+1.
template <class NextSize>
EstimateResult run_prefix_iterations(PrefixModel& model, std::size_t n, Stream& rng, NextSize&& next_size,
                                     bool keep_values = false) {
  EstimateResult result;
  result.iterations = n;
  if (keep_values) {
    result.values.reserve(n);
  }
  Evaluation e = model.fresh_eval(rng);
  double sum = e.value;
  result.total_cost = e.cost;
  if (keep_values) {
    result.values.push_back(e.value);
  }
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t size = next_size(k);
    e = model.redraw_prefix(size, rng);
    sum += e.value;
    result.total_cost += e.cost;
    if (keep_values) {
      result.values.push_back(e.value);
    }
  }
  result.estimate = sum / static_cast<double>(n);
  return result;
}

/// The randomized dimension reduction estimator f_n.
EstimateResult rdr_estimate(PrefixModel& model, const RedrawDistribution& q, std::size_t n, Stream& rng,
                            bool keep_values = false);

}  // namespace rdr
