#include "rdr/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdr/errors.hpp"

namespace rdr {

namespace {

void check_lengths(const RedrawDistribution& q, std::size_t profile_dimension, const char* what) {
  if (q.dimension() != profile_dimension) {
    throw InvalidParameter(std::string(what) + ": dimension mismatch (q has " + std::to_string(q.dimension()) +
                           ", profile has " + std::to_string(profile_dimension) + ")");
  }
}

}  // namespace

std::size_t sample_redraw_size(const RedrawDistribution& q, double u) {
  const auto values = q.values();
  // Number of q_i strictly above u; q_0 = 1 > u guarantees at least one.
  const auto it = std::partition_point(values.begin(), values.end(), [u](double qi) { return qi > u; });
  return static_cast<std::size_t>(it - values.begin());
}

double expected_iteration_cost(const RedrawDistribution& q, const CostProfile& t) {
  check_lengths(q, t.dimension(), "expected_iteration_cost");
  double total = 0.0;
  for (std::size_t i = 0; i < q.dimension(); ++i) {
    total += q[i] * t.increment(i);
  }
  return total;
}

double variance_bound_rhs(const RedrawDistribution& q, const VarianceProfile& nu) {
  check_lengths(q, nu.dimension(), "variance_bound_rhs");
  double total = 0.0;
  for (std::size_t i = 0; i < q.dimension(); ++i) {
    total += (nu[i] - nu[i + 1]) / q[i];
  }
  return total;
}

double work_variance_product(const RedrawDistribution& q, const CostProfile& t, const VarianceProfile& nu) {
  return expected_iteration_cost(q, t) * variance_bound_rhs(q, nu);
}

VarianceProfile nu_star_from_c(const VarianceProfile& c) {
  std::vector<double> nu(c.values().begin(), c.values().end());
  for (std::size_t i = 1; i < nu.size(); ++i) {
    nu[i] *= 2.0;
  }
  return VarianceProfile::relaxed(std::move(nu));
}

RedrawDistribution power_law_q(double gamma, std::size_t d) {
  if (!(gamma < 0.0)) {
    throw InvalidParameter("power_law: gamma must be negative");
  }
  std::vector<double> q(d);
  for (std::size_t i = 0; i < d; ++i) {
    q[i] = std::pow(static_cast<double>(i + 1), (gamma - 1.0) / 2.0);
  }
  return RedrawDistribution(std::move(q));
}

RedrawDistribution convex_profile_q(const CostProfile& bound_cost, const VarianceProfile& nu) {
  const std::size_t d = nu.dimension();
  if (bound_cost.dimension() != d) {
    throw InvalidParameter("convex_profile: cost and variance profiles differ in dimension");
  }
  std::vector<double> theta(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!(nu[i] > 0.0)) {
      throw InvalidParameter("convex_profile: nu_" + std::to_string(i) + " must be positive");
    }
    theta[i] = (nu[i + 1] - nu[i]) / bound_cost.increment(i);
  }
  for (std::size_t i = 0; i + 1 < d; ++i) {
    if (theta[i + 1] < theta[i]) {
      throw InvalidParameter("convex_profile: slope sequence theta is not increasing at index " +
                             std::to_string(i + 1));
    }
  }
  std::vector<double> q(d);
  for (std::size_t i = 0; i < d; ++i) {
    q[i] = std::sqrt(theta[i] / theta[0]);
  }
  q[0] = 1.0;
  return RedrawDistribution(std::move(q));
}

RedrawDistribution sqrt_c_q(const CostProfile& t, const VarianceProfile& c) {
  const std::size_t d = c.dimension();
  if (t.dimension() != d) {
    throw InvalidParameter("sqrt_c: cost and variance profiles differ in dimension");
  }
  if (!(c[d - 1] > 0.0)) {
    throw InvalidParameter("sqrt_c: C(d-1) must be positive");
  }
  std::vector<double> q(d);
  for (std::size_t i = 0; i < d; ++i) {
    q[i] = std::sqrt(t[1] * c[i] / (t[i + 1] * c[0]));
  }
  q[0] = 1.0;
  return RedrawDistribution(std::move(q));
}

RedrawDistribution log_optimal_q(const CostProfile& t) {
  std::vector<double> q(t.dimension());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = t[1] / t[i + 1];
  }
  return RedrawDistribution(std::move(q));
}

RedrawDistribution harmonic_q(std::size_t d) {
  std::vector<double> q(d);
  for (std::size_t i = 0; i < d; ++i) {
    q[i] = 1.0 / static_cast<double>(i + 1);
  }
  return RedrawDistribution(std::move(q));
}

RedrawDistribution explicit_q(const QFamily& family, std::size_t d) {
  auto check = [d](std::size_t got) {
    if (got != d) {
      throw InvalidParameter("explicit_q: family parameters have dimension " + std::to_string(got) + ", expected " +
                             std::to_string(d));
    }
  };
  return std::visit(
      [&](const auto& f) -> RedrawDistribution {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, PowerLaw>) {
          return power_law_q(f.gamma, d);
        } else if constexpr (std::is_same_v<F, ConvexProfile>) {
          check(f.nu.dimension());
          return convex_profile_q(f.bound_cost, f.nu);
        } else if constexpr (std::is_same_v<F, SqrtC>) {
          check(f.c.dimension());
          return sqrt_c_q(f.t, f.c);
        } else if constexpr (std::is_same_v<F, LogOptimal>) {
          check(f.t.dimension());
          return log_optimal_q(f.t);
        } else {
          return harmonic_q(d);
        }
      },
      family);
}

std::size_t choose_n(std::size_t d, double expected_cost, double budget_multiplier) {
  if (!(expected_cost > 0.0)) {
    throw InvalidParameter("choose_n: expected iteration cost must be positive");
  }
  const double n = 1.0 + std::round(budget_multiplier * static_cast<double>(d) / expected_cost);
  return std::max<std::size_t>(2, static_cast<std::size_t>(n));
}

EstimateResult rdr_estimate(PrefixModel& model, const RedrawDistribution& q, std::size_t n, Stream& rng,
                            bool keep_values) {
  if (model.dimension() != q.dimension()) {
    throw InvalidParameter("rdr_estimate: model dimension " + std::to_string(model.dimension()) +
                           " does not match q dimension " + std::to_string(q.dimension()));
  }
  if (n == 0) {
    throw InvalidParameter("rdr_estimate: n must be at least 1");
  }
  return run_prefix_iterations(
      model, n, rng, [&](std::size_t) { return sample_redraw_size(q, rng.uniform()); }, keep_values);
}

}  // namespace rdr
