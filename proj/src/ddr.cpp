#include "rdr/ddr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rdr/errors.hpp"

namespace rdr {

MuSequence mu_sequence(const RedrawDistribution& q_hat) {
  const std::size_t d = q_hat.dimension();
  MuSequence out;
  out.mu.resize(d);
  out.q_bar.resize(d);
  out.mu[0] = 1;
  out.q_bar[0] = 1.0;
  for (std::size_t i = 1; i < d; ++i) {
    const double prev = static_cast<double>(out.mu[i - 1]);
    const double factor = std::floor(1.0 / (prev * q_hat[i]) * (1.0 + 1e-12));
    const double next = prev * std::max(factor, 1.0);
    if (next > 0x1.0p62) {
      throw NumericError("mu_sequence: mu_" + std::to_string(i) + " overflows");
    }
    out.mu[i] = out.mu[i - 1] * static_cast<std::uint64_t>(std::max(factor, 1.0));
    out.q_bar[i] = 1.0 / static_cast<double>(out.mu[i]);
  }
  return out;
}

std::size_t schedule_size(std::uint64_t k, const MuSequence& mu) {
  if (k == 0) {
    throw InvalidParameter("schedule_size: k must be positive");
  }
  // mu_i | k holds on a prefix of i since each mu_i divides mu_{i+1}.
  const auto it = std::partition_point(mu.mu.begin(), mu.mu.end(), [k](std::uint64_t m) { return k % m == 0; });
  return static_cast<std::size_t>(it - mu.mu.begin());
}

double ddr_cost(const MuSequence& mu, const CostProfile& t, std::size_t n) {
  if (mu.mu.size() != t.dimension()) {
    throw InvalidParameter("ddr_cost: dimension mismatch");
  }
  if (n == 0) {
    throw InvalidParameter("ddr_cost: n must be positive");
  }
  double cost = t.total();
  for (std::size_t i = 0; i < mu.mu.size(); ++i) {
    cost += static_cast<double>((n - 1) / mu.mu[i]) * t.increment(i);
  }
  return cost;
}

EstimateResult ddr_estimate(PrefixModel& model, const MuSequence& mu, std::size_t n, Stream& rng, bool keep_values) {
  if (mu.mu.size() != model.dimension()) {
    throw InvalidParameter("ddr_estimate: mu sequence dimension does not match the model");
  }
  if (n == 0) {
    throw InvalidParameter("ddr_estimate: n must be positive");
  }
  return run_prefix_iterations(
      model, n, rng, [&mu](std::size_t k) { return schedule_size(k, mu); }, keep_values);
}

std::vector<std::size_t> naive_schedule(const RedrawDistribution& q, std::size_t n) {
  const std::size_t d = q.dimension();
  if (!(q[d - 1] < 1.0)) {
    throw InvalidParameter("naive_schedule: q_{d-1} must be below 1");
  }
  std::vector<std::size_t> schedule(n);
  const double nn = static_cast<double>(n);
  std::size_t i = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    // Smallest i with k <= n (1 - q_i).
    while (i < d && static_cast<double>(k) > nn * (1.0 - q[i])) {
      ++i;
    }
    schedule[k - 1] = i;
  }
  return schedule;
}

EstimateResult schedule_estimate(PrefixModel& model, const std::vector<std::size_t>& schedule, std::size_t n,
                                 Stream& rng, bool keep_values) {
  if (n == 0) {
    throw InvalidParameter("schedule_estimate: n must be positive");
  }
  if (schedule.size() + 1 < n) {
    throw InvalidParameter("schedule_estimate: schedule shorter than n - 1");
  }
  const std::size_t d = model.dimension();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (schedule[k] == 0 || schedule[k] > d) {
      throw InvalidParameter("schedule_estimate: redraw size out of [1, d]");
    }
  }
  return run_prefix_iterations(
      model, n, rng, [&schedule](std::size_t k) { return schedule[k - 1]; }, keep_values);
}

}  // namespace rdr
