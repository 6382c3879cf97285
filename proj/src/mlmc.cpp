#include "rdr/mlmc.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "rdr/errors.hpp"

namespace rdr {

std::vector<std::size_t> default_levels(std::size_t d) {
  if (d < 2) {
    throw InvalidParameter("default_levels: d must be at least 2");
  }
  std::size_t levels = 0;
  while ((std::size_t{1} << levels) <= d) {
    ++levels;
  }
  std::vector<std::size_t> m(levels);
  for (std::size_t l = 1; l <= levels; ++l) {
    m[l - 1] = d >> (levels - l);
  }
  return m;
}

LevelStats estimate_level_stats(PrefixModel& model, const std::vector<std::size_t>& m, Stream& rng,
                                std::size_t samples) {
  if (samples < 2) {
    throw InvalidParameter("estimate_level_stats: at least two samples are required");
  }
  LevelStats stats;
  stats.variance.resize(m.size());
  stats.cost.resize(m.size());
  for (std::size_t l = 0; l < m.size(); ++l) {
    const std::size_t coarse = l == 0 ? 0 : m[l - 1];
    double mean = 0.0;
    double m2 = 0.0;
    double cost = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      const LevelPair p = model.coupled_levels(m[l], coarse, rng);
      const double x = p.fine - p.coarse;
      const double delta = x - mean;
      mean += delta / static_cast<double>(s + 1);
      m2 += delta * (x - mean);
      cost += p.cost;
    }
    stats.variance[l] = m2 / static_cast<double>(samples - 1);
    stats.cost[l] = cost / static_cast<double>(samples);
  }
  return stats;
}

std::vector<std::size_t> allocate_samples(const std::vector<double>& variance, const std::vector<double>& cost,
                                          double budget) {
  const std::size_t levels = variance.size();
  if (levels == 0 || cost.size() != levels) {
    throw InvalidParameter("allocate_samples: variance and cost must be nonempty and of equal length");
  }
  std::vector<double> weight(levels);
  double scale = 0.0;
  for (std::size_t l = 0; l < levels; ++l) {
    if (!(variance[l] >= 0.0) || !(cost[l] > 0.0)) {
      throw InvalidParameter("allocate_samples: level " + std::to_string(l + 1) +
                             " needs V >= 0 and a positive cost");
    }
    weight[l] = std::sqrt(variance[l] / cost[l]);
    scale += std::sqrt(variance[l] * cost[l]);
  }
  if (levels == 1) {
    return {static_cast<std::size_t>(std::max(1.0, std::round(budget / cost[0])))};
  }

  auto allocation = [&](double lambda) {
    std::vector<std::size_t> n(levels);
    for (std::size_t l = 0; l < levels; ++l) {
      n[l] = static_cast<std::size_t>(std::max(1.0, std::round(lambda * weight[l])));
    }
    return n;
  };
  auto total = [&](const std::vector<std::size_t>& n) {
    double c = 0.0;
    for (std::size_t l = 0; l < levels; ++l) {
      c += static_cast<double>(n[l]) * cost[l];
    }
    return c;
  };
  if (scale == 0.0) {
    return allocation(0.0);
  }

  double lo = 0.0;
  double hi = budget / scale;
  while (total(allocation(hi)) < budget) {
    hi *= 2.0;
  }
  std::vector<std::size_t> best = allocation(hi);
  double best_gap = std::abs(total(best) - budget);
  for (int iter = 0; iter < 200 && best_gap > 0.01 * budget; ++iter) {
    const double mid = 0.5 * (lo + hi);
    std::vector<std::size_t> n = allocation(mid);
    const double c = total(n);
    if (std::abs(c - budget) < best_gap) {
      best_gap = std::abs(c - budget);
      best = n;
    }
    (c < budget ? lo : hi) = mid;
  }
  return best;
}

MlmcPlan::MlmcPlan(std::vector<std::size_t> m, std::vector<std::size_t> n, std::vector<double> variance,
                   std::vector<double> cost)
    : m_(std::move(m)), n_(std::move(n)), variance_(std::move(variance)), cost_(std::move(cost)) {
  const std::size_t levels = m_.size();
  if (levels == 0 || n_.size() != levels || variance_.size() != levels || cost_.size() != levels) {
    throw InvalidParameter("MlmcPlan: level vectors must be nonempty and of equal length");
  }
  for (std::size_t l = 0; l < levels; ++l) {
    if (m_[l] == 0 || (l > 0 && m_[l] <= m_[l - 1])) {
      throw InvalidParameter("MlmcPlan: truncation indices must be positive and strictly increasing");
    }
    if (n_[l] == 0) {
      throw InvalidParameter("MlmcPlan: n_" + std::to_string(l + 1) + " must be at least 1");
    }
  }
}

double MlmcPlan::predicted_variance() const {
  double v = 0.0;
  for (std::size_t l = 0; l < levels(); ++l) {
    v += variance_[l] / static_cast<double>(n_[l]);
  }
  return v;
}

double MlmcPlan::expected_cost() const {
  double c = 0.0;
  for (std::size_t l = 0; l < levels(); ++l) {
    c += static_cast<double>(n_[l]) * cost_[l];
  }
  return c;
}

MlmcPlan plan_mlmc(PrefixModel& model, double budget, Stream& rng, std::size_t samples) {
  std::vector<std::size_t> m = default_levels(model.dimension());
  LevelStats stats = estimate_level_stats(model, m, rng, samples);
  std::vector<std::size_t> n = allocate_samples(stats.variance, stats.cost, budget);
  return MlmcPlan(std::move(m), std::move(n), std::move(stats.variance), std::move(stats.cost));
}

EstimateResult mlmc_estimate(PrefixModel& model, const MlmcPlan& plan, Stream& rng) {
  if (plan.m().back() != model.dimension()) {
    throw InvalidParameter("mlmc_estimate: finest level must equal the model dimension");
  }
  EstimateResult result;
  for (std::size_t l = 0; l < plan.levels(); ++l) {
    const std::size_t coarse = l == 0 ? 0 : plan.m()[l - 1];
    const std::size_t n = plan.n()[l];
    double sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const LevelPair p = model.coupled_levels(plan.m()[l], coarse, rng);
      sum += p.fine - p.coarse;
      result.total_cost += p.cost;
    }
    result.estimate += sum / static_cast<double>(n);
    result.iterations += n;
  }
  return result;
}

}  // namespace rdr
