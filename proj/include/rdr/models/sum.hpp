#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rdr/model.hpp"
#include "rdr/profiles.hpp"

namespace rdr {

/// f(x) = g(scale * sum_j x_j) with independent components x_j = sigma_j * Z_j.
/// A running sum is maintained so that redrawing i components costs O(i).
/// The fill value for truncated evaluation is 0.
class SumModel final : public PrefixModel {
 public:
  using Transform = std::function<double(double)>;
  /// Draws one standardized component Z_j.
  using Sampler = std::function<double(Stream&)>;

  SumModel(std::string name, std::vector<double> sigma, double scale, Transform g, Sampler sampler);

  std::size_t dimension() const override { return sigma_.size(); }
  std::string name() const override { return name_; }

  Evaluation fresh_eval(Stream& rng) override;
  Evaluation redraw_prefix(std::size_t i, Stream& rng) override;
  SplicedValues mixed_eval(std::size_t i, Stream& rng) override;
  Evaluation truncated_eval(std::size_t m, Stream& rng) override;
  LevelPair coupled_levels(std::size_t fine, std::size_t coarse, Stream& rng) override;
  std::unique_ptr<PrefixModel> clone() const override { return std::make_unique<SumModel>(*this); }

  const std::vector<double>& inputs() const noexcept { return x_; }
  const std::vector<double>& sigma() const noexcept { return sigma_; }

  /// scale^2 * sum_{j > i} sigma_j^2. This is C(i) exactly when g is the
  /// identity and Z_j has unit variance, and an upper bound on C(i) when g is
  /// 1-Lipschitz and scale = 1.
  double tail_variance(std::size_t i) const;

  /// Exact profile C = (tail_variance(0), ..., tail_variance(d)).
  VarianceProfile tail_variance_profile() const;

  /// q_i = sigma_{i+1} / sigma_1, the choice recommended for Lipschitz sums.
  RedrawDistribution recommended_q() const;

 private:
  double component(std::size_t j, Stream& rng) { return sigma_[j] * sampler_(rng); }
  double partial_sum(std::size_t begin, std::size_t end, Stream& rng);
  double apply(double s) const { return g_(scale_ * s); }

  std::string name_;
  std::vector<double> sigma_;
  double scale_;
  Transform g_;
  Sampler sampler_;
  std::vector<double> x_;
  double sum_ = 0.0;
};

/// Standard normal component sampler.
SumModel::Sampler standard_normal_sampler();

/// Centered sum f(x) = d^{-1/2} sum_j x_j with unit-variance components;
/// C(i) = (d - i) / d.
SumModel sum_model(std::size_t d, SumModel::Sampler sampler = standard_normal_sampler());

/// f(x) = g(sum_j x_j), x_j ~ N(0, sigma_j^2), sigma decreasing and positive,
/// g 1-Lipschitz.
SumModel lipschitz_sum_model(std::vector<double> sigma, SumModel::Transform g);

/// g(s) = max(s - strike, 0).
SumModel::Transform call_payoff(double strike);

}  // namespace rdr
