#include "rdr/tuning.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "rdr/errors.hpp"
#include "rdr/estimator.hpp"

namespace rdr {

namespace {

// Hull vertices of (t_i, nu_i), i = 0..d. A point collinear with its
// neighbours is not a vertex.
std::vector<std::size_t> hull_vertices(std::span<const double> t, std::span<const double> nu) {
  std::vector<std::size_t> stack;
  stack.reserve(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    while (stack.size() >= 2) {
      const std::size_t a = stack[stack.size() - 2];
      const std::size_t b = stack.back();
      const double cross = (t[b] - t[a]) * (nu[j] - nu[a]) - (nu[b] - nu[a]) * (t[j] - t[a]);
      if (cross > 0.0) {
        break;
      }
      stack.pop_back();
    }
    stack.push_back(j);
  }
  return stack;
}

// q_i = sqrt(theta_i / theta_0), zero where theta_i = 0.
std::vector<double> q_from_theta(const std::vector<double>& theta) {
  std::vector<double> q(theta.size());
  q[0] = 1.0;
  for (std::size_t i = 1; i < theta.size(); ++i) {
    const double ratio = theta[i] / theta[0];
    q[i] = std::min(q[i - 1], std::sqrt(std::max(ratio, 0.0)));
  }
  return q;
}

void check_same_dimension(const CostProfile& t, const VarianceProfile& nu, const char* what) {
  if (t.dimension() != nu.dimension()) {
    throw InvalidParameter(std::string(what) + ": cost profile has dimension " + std::to_string(t.dimension()) +
                           ", variance profile " + std::to_string(nu.dimension()));
  }
}

CEstimate mean_and_error(double sum, double sum_sq, std::size_t n) {
  const double count = static_cast<double>(n);
  const double mean = sum / count;
  const double var = n > 1 ? std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0)) : 0.0;
  return {mean, std::sqrt(var / count)};
}

}  // namespace

HullResult lower_hull(const CostProfile& t, const VarianceProfile& nu) {
  check_same_dimension(t, nu, "lower_hull");
  const std::size_t d = nu.dimension();
  const auto tv = t.values();
  const auto nv = nu.values();
  std::vector<std::size_t> support = hull_vertices(tv, nv);

  std::vector<double> prime(d + 1);
  std::vector<double> theta(d);
  for (std::size_t k = 0; k + 1 < support.size(); ++k) {
    const std::size_t a = support[k];
    const std::size_t b = support[k + 1];
    const double slope = (nv[b] - nv[a]) / (tv[b] - tv[a]);
    prime[a] = nv[a];
    for (std::size_t i = a + 1; i < b; ++i) {
      const double v = nv[a] + slope * (tv[i] - tv[a]);
      prime[i] = std::clamp(v, nv[b], nv[i]);
    }
    for (std::size_t i = a; i < b; ++i) {
      theta[i] = slope;
    }
  }
  prime[d] = nv[d];
  return {VarianceProfile(std::move(prime)), std::move(support), std::move(theta)};
}

OptimalQ optimal_q(const CostProfile& t, const VarianceProfile& nu) {
  check_same_dimension(t, nu, "optimal_q");
  const std::size_t d = nu.dimension();
  for (std::size_t i = 0; i < d; ++i) {
    if (!(nu[i] > 0.0)) {
      throw InvalidParameter("optimal_q: nu_" + std::to_string(i) +
                             " must be positive; repair the profile before optimizing");
    }
  }
  const HullResult hull = lower_hull(t, nu);
  double root = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    root += std::sqrt(-hull.theta[i]) * t.increment(i);
  }
  return {RedrawDistribution(q_from_theta(hull.theta)), root * root};
}

CEstimate estimate_c(PrefixModel& model, std::size_t i, std::size_t samples, Stream& rng) {
  if (i >= model.dimension()) {
    throw InvalidParameter("estimate_c: index must be below d");
  }
  if (samples == 0) {
    throw InvalidParameter("estimate_c: samples must be positive");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const SplicedValues v = model.mixed_eval(i, rng);
    const double x = (v.original - v.tail_swapped) * (v.prefix_swapped - v.both_swapped);
    sum += x;
    sum_sq += x * x;
  }
  return mean_and_error(sum, sum_sq, samples);
}

CEstimate estimate_c_covariance(PrefixModel& model, std::size_t i, std::size_t samples, Stream& rng) {
  if (i >= model.dimension()) {
    throw InvalidParameter("estimate_c_covariance: index must be below d");
  }
  if (samples < 2) {
    throw InvalidParameter("estimate_c_covariance: at least two samples are required");
  }
  // Products are centred by the pooled mean of both coordinates (they share a
  // distribution); the standard error is the delta-method one from the
  // per-sample products.
  std::vector<double> a(samples);
  std::vector<double> b(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const SplicedValues v = model.mixed_eval(i, rng);
    a[s] = v.original;
    b[s] = v.prefix_swapped;
  }
  double mean = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    mean += a[s] + b[s];
  }
  mean /= 2.0 * static_cast<double>(samples);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = (a[s] - mean) * (b[s] - mean);
    sum += x;
    sum_sq += x * x;
  }
  return mean_and_error(sum, sum_sq, samples);
}

TunedPlan auto_tune(const PrefixModel& model, const CostProfile& t, Stream& rng, std::size_t samples, int threads) {
  const std::size_t d = model.dimension();
  if (d < 2) {
    throw InvalidParameter("auto_tune: d must be at least 2");
  }
  if (t.dimension() != d) {
    throw InvalidParameter("auto_tune: cost profile dimension does not match the model");
  }

  std::vector<std::size_t> indices;
  for (std::size_t p = 1; p <= d; p *= 2) {
    indices.push_back(p - 1);
  }
  std::vector<CEstimate> estimates(indices.size());
  const int n_idx = static_cast<int>(indices.size());
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(workers)
  {
    std::unique_ptr<PrefixModel> local = model.clone();
#pragma omp for schedule(dynamic, 1)
    for (int k = 0; k < n_idx; ++k) {
      Stream sub = rng.substream(indices[k]);
      estimates[k] = estimate_c(*local, indices[k], samples, sub);
    }
  }

  TunedPlan plan{RedrawDistribution::ones(d), 0.0, 0.0, VarianceProfile::relaxed(std::vector<double>(d + 1, 0.0)),
                 VarianceProfile(std::vector<double>(d + 1, 0.0)), {}, 0.0};
  for (std::size_t k = 0; k < indices.size(); ++k) {
    plan.c_estimates.emplace(indices[k], estimates[k]);
  }
  plan.tuning_cost = 3.0 * static_cast<double>(d) * static_cast<double>(samples * indices.size());

  // Steps 2-3.
  std::vector<double> nu(d + 1, 0.0);
  nu[0] = estimates[0].estimate;
  std::size_t k = 0;
  for (std::size_t i = 1; i < d; ++i) {
    while (k + 1 < indices.size() && indices[k + 1] <= i) {
      ++k;
    }
    nu[i] = 2.0 * estimates[k].estimate;
  }
  for (std::size_t i = d - 1; i >= 1; --i) {
    nu[i] = std::max(nu[i], nu[i + 1]);
  }
  nu[0] = std::max(nu[0], nu[1] / 2.0);
  if (!(nu[0] > 0.0) || !std::isfinite(nu[0])) {
    throw NumericError("auto_tune: degenerate variance (estimated C(0) = " + std::to_string(estimates[0].estimate) +
                       "); f looks constant at tuning precision");
  }
  plan.nu_proxy = VarianceProfile::relaxed(nu);

  // Step 4.
  HullResult hull = lower_hull(t, plan.nu_proxy);
  std::vector<double> q = q_from_theta(hull.theta);

  // Step 5.
  double cost = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    cost += q[i] * t.increment(i);
  }
  if (t[d] > t[1] * (1.0 + 1e-12)) {
    const double log_ratio = std::log(t[d] / t[1]);
    for (std::size_t i = 0; i < d; ++i) {
      q[i] = std::min(1.0, std::max(q[i], cost / (t[i + 1] * log_ratio)));
    }
  }
  plan.q = RedrawDistribution(std::move(q));
  plan.nu_hull = std::move(hull.nu_prime);
  plan.expected_cost = expected_iteration_cost(plan.q, t);
  plan.predicted_r = work_variance_product(plan.q, t, plan.nu_hull);
  return plan;
}

OptimalQ grid_search_q(const CostProfile& t, const VarianceProfile& nu, std::size_t resolution) {
  check_same_dimension(t, nu, "grid_search_q");
  const std::size_t d = nu.dimension();
  if (d > 6) {
    throw InvalidParameter("grid_search_q: dimension " + std::to_string(d) + " is too large (at most 6)");
  }
  if (resolution < 2 || resolution > 50) {
    throw InvalidParameter("grid_search_q: resolution must be in [2, 50]");
  }
  std::vector<double> grid(resolution);
  const double ratio = std::pow(1e-3, 1.0 / static_cast<double>(resolution - 1));
  for (std::size_t k = 0; k < resolution; ++k) {
    grid[k] = std::pow(ratio, static_cast<double>(k));
  }

  std::vector<std::size_t> pick(d, 0);
  std::vector<std::size_t> best_pick(d, 0);
  double best = std::numeric_limits<double>::infinity();

  // Both factors of R are sums over i, so partial sums are carried down the
  // recursion. pick[i] is non-decreasing, i.e. q is decreasing.
  auto recurse = [&](auto&& self, std::size_t i, std::size_t from, double cost, double var) -> void {
    if (i == d) {
      const double r = cost * var;
      if (r < best) {
        best = r;
        best_pick = pick;
      }
      return;
    }
    for (std::size_t k = from; k < resolution; ++k) {
      pick[i] = k;
      self(self, i + 1, k, cost + grid[k] * t.increment(i), var + (nu[i] - nu[i + 1]) / grid[k]);
    }
  };
  recurse(recurse, 1, 0, t.increment(0), nu[0] - nu[1]);

  std::vector<double> q(d);
  for (std::size_t i = 0; i < d; ++i) {
    q[i] = grid[best_pick[i]];
  }
  q[0] = 1.0;
  return {RedrawDistribution(std::move(q)), best};
}

}  // namespace rdr
