#pragma once

#include <cstddef>
#include <vector>

#include "rdr/estimator.hpp"
#include "rdr/model.hpp"
#include "rdr/random.hpp"

namespace rdr {

/// Truncation indices m_1 < ... < m_L = d with m_l = floor(2^(l-L) d),
/// L = floor(log2 d) + 1.
std::vector<std::size_t> default_levels(std::size_t d);

struct LevelStats {
  /// V_l = var(phi_l - phi_{l-1}).
  std::vector<double> variance;
  /// t_hat_l, input draws per coupled sample.
  std::vector<double> cost;
};

/// Sample variances of the coupled differences, `samples` per level.
LevelStats estimate_level_stats(PrefixModel& model, const std::vector<std::size_t>& m, Stream& rng,
                                std::size_t samples = 1000);

/// n_l = max(1, round(lambda sqrt(V_l / t_hat_l))), lambda chosen by bisection
/// so that sum_l n_l t_hat_l is as close to `budget` as the rounding allows.
std::vector<std::size_t> allocate_samples(const std::vector<double>& variance, const std::vector<double>& cost,
                                          double budget);

class MlmcPlan {
 public:
  MlmcPlan(std::vector<std::size_t> m, std::vector<std::size_t> n, std::vector<double> variance,
           std::vector<double> cost);

  std::size_t levels() const noexcept { return m_.size(); }
  const std::vector<std::size_t>& m() const noexcept { return m_; }
  const std::vector<std::size_t>& n() const noexcept { return n_; }
  const std::vector<double>& variance() const noexcept { return variance_; }
  const std::vector<double>& cost() const noexcept { return cost_; }

  /// sum_l V_l / n_l.
  double predicted_variance() const;
  /// sum_l n_l t_hat_l.
  double expected_cost() const;

 private:
  std::vector<std::size_t> m_;
  std::vector<std::size_t> n_;
  std::vector<double> variance_;
  std::vector<double> cost_;
};

/// Estimates level statistics and allocates `budget` across default levels.
MlmcPlan plan_mlmc(PrefixModel& model, double budget, Stream& rng, std::size_t samples = 1000);

/// sum_l of independent level averages of n_l coupled differences.
/// iterations reports sum_l n_l.
EstimateResult mlmc_estimate(PrefixModel& model, const MlmcPlan& plan, Stream& rng);

}  // namespace rdr
