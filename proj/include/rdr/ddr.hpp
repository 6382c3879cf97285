#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rdr/estimator.hpp"
#include "rdr/model.hpp"
#include "rdr/profiles.hpp"
#include "rdr/random.hpp"

namespace rdr {

/// mu_0 = 1, mu_i = the largest multiple of mu_{i-1} not above 1 / q_i.
struct MuSequence {
  std::vector<std::uint64_t> mu;
  /// q_bar_i = 1 / mu_i.
  std::vector<double> q_bar;
};

MuSequence mu_sequence(const RedrawDistribution& q_hat);

/// N_bar_k = max{i in [1, d] : mu_{i-1} divides k}, k >= 1.
std::size_t schedule_size(std::uint64_t k, const MuSequence& mu);

/// Realized cost of n DDR iterations, t_d + sum_i floor((n-1) / mu_i) (t_{i+1} - t_i).
double ddr_cost(const MuSequence& mu, const CostProfile& t, std::size_t n);

/// Redraws N_bar_k leading inputs before iteration k+1.
EstimateResult ddr_estimate(PrefixModel& model, const MuSequence& mu, std::size_t n, Stream& rng,
                            bool keep_values = false);

/// Block schedule N_1..N_n with N_k = i for k in (n(1 - q_{i-1}), n(1 - q_i)],
/// q_d = 0. Requires q_{d-1} < 1.
std::vector<std::size_t> naive_schedule(const RedrawDistribution& q, std::size_t n);

/// Runs n iterations redrawing schedule[k-1] inputs before iteration k+1;
/// schedule must hold at least n - 1 entries.
EstimateResult schedule_estimate(PrefixModel& model, const std::vector<std::size_t>& schedule, std::size_t n,
                                 Stream& rng, bool keep_values = false);

}  // namespace rdr
