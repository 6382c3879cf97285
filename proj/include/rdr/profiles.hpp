#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rdr {

/// Redraw distribution q = (q_0, ..., q_{d-1}) with 1 = q_0 >= q_1 >= ... >= q_{d-1} > 0.
/// q_i is the probability that more than i leading inputs are redrawn in one
/// iteration. The sentinel q_d = 0 is implied and never stored.
class RedrawDistribution {
 public:
  explicit RedrawDistribution(std::vector<double> q);

  /// q = (1, ..., 1): every iteration is a full redraw.
  static RedrawDistribution ones(std::size_t d);

  std::size_t dimension() const noexcept { return q_.size(); }

  /// q_i for 0 <= i <= d, with q_d = 0.
  double operator[](std::size_t i) const noexcept { return i < q_.size() ? q_[i] : 0.0; }

  std::span<const double> values() const noexcept { return q_; }

 private:
  std::vector<double> q_;
};

/// Cost profile t = (t_0, ..., t_d), t_0 = 0 and strictly increasing. t_i is the
/// expected cost of redrawing the first i inputs and re-evaluating f.
class CostProfile {
 public:
  explicit CostProfile(std::vector<double> t);

  /// t_i = i: one unit per redrawn input component.
  static CostProfile linear(std::size_t d);

  std::size_t dimension() const noexcept { return t_.size() - 1; }
  double operator[](std::size_t i) const noexcept { return t_[i]; }
  double increment(std::size_t i) const noexcept { return t_[i + 1] - t_[i]; }
  double total() const noexcept { return t_.back(); }

  std::span<const double> values() const noexcept { return t_; }

 private:
  std::vector<double> t_;
};

/// Profile nu = (nu_0, ..., nu_d) of nonnegative reals with nu_d = 0. The
/// checked constructor also enforces nu_i >= nu_{i+1}; `relaxed` skips the
/// monotonicity check and is used for the doubled profile nu* and for raw
/// proxies fed to the hull, neither of which need be decreasing.
class VarianceProfile {
 public:
  explicit VarianceProfile(std::vector<double> nu);

  static VarianceProfile relaxed(std::vector<double> nu);

  std::size_t dimension() const noexcept { return nu_.size() - 1; }
  double operator[](std::size_t i) const noexcept { return nu_[i]; }

  std::span<const double> values() const noexcept { return nu_; }

 private:
  struct Unchecked {};
  VarianceProfile(std::vector<double> nu, Unchecked);

  std::vector<double> nu_;
};

}  // namespace rdr
