#include "rdr/models/sum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdr/errors.hpp"

namespace rdr {

SumModel::SumModel(std::string name, std::vector<double> sigma, double scale, Transform g, Sampler sampler)
    : name_(std::move(name)),
      sigma_(std::move(sigma)),
      scale_(scale),
      g_(std::move(g)),
      sampler_(std::move(sampler)),
      x_(sigma_.size(), 0.0) {
  if (sigma_.empty()) {
    throw InvalidParameter(name_ + ": dimension must be at least 1");
  }
  for (std::size_t j = 0; j < sigma_.size(); ++j) {
    if (!(sigma_[j] > 0.0)) {
      throw InvalidParameter(name_ + ": sigma_" + std::to_string(j + 1) + " must be positive");
    }
  }
  if (!g_ || !sampler_) {
    throw InvalidParameter(name_ + ": transform and sampler are required");
  }
}

Evaluation SumModel::fresh_eval(Stream& rng) {
  sum_ = 0.0;
  for (std::size_t j = 0; j < x_.size(); ++j) {
    x_[j] = component(j, rng);
    sum_ += x_[j];
  }
  return {apply(sum_), static_cast<double>(x_.size())};
}

Evaluation SumModel::redraw_prefix(std::size_t i, Stream& rng) {
  if (i == 0 || i > x_.size()) {
    throw InvalidParameter(name_ + ": redraw size out of range");
  }
  if (i == x_.size()) {
    return fresh_eval(rng);
  }
  for (std::size_t j = 0; j < i; ++j) {
    const double fresh = component(j, rng);
    sum_ += fresh - x_[j];
    x_[j] = fresh;
  }
  return {apply(sum_), static_cast<double>(i)};
}

double SumModel::partial_sum(std::size_t begin, std::size_t end, Stream& rng) {
  double s = 0.0;
  for (std::size_t j = begin; j < end; ++j) {
    s += component(j, rng);
  }
  return s;
}

SplicedValues SumModel::mixed_eval(std::size_t i, Stream& rng) {
  const std::size_t d = x_.size();
  if (i >= d) {
    throw InvalidParameter(name_ + ": mixed_eval index must be below d");
  }
  const double prefix = partial_sum(0, i, rng);
  const double tail = partial_sum(i, d, rng);
  const double prefix1 = partial_sum(0, i, rng);
  const double tail1 = partial_sum(i, d, rng);
  const double tail2 = partial_sum(i, d, rng);
  return {apply(prefix + tail), apply(prefix + tail1), apply(prefix1 + tail), apply(prefix1 + tail2),
          3.0 * static_cast<double>(d)};
}

Evaluation SumModel::truncated_eval(std::size_t m, Stream& rng) {
  if (m > x_.size()) {
    throw InvalidParameter(name_ + ": truncation index exceeds d");
  }
  return {apply(partial_sum(0, m, rng)), static_cast<double>(m)};
}

LevelPair SumModel::coupled_levels(std::size_t fine, std::size_t coarse, Stream& rng) {
  if (fine > x_.size() || coarse > fine) {
    throw InvalidParameter(name_ + ": invalid level pair");
  }
  const double head = partial_sum(0, coarse, rng);
  const double rest = partial_sum(coarse, fine, rng);
  return {apply(head + rest), coarse == 0 ? 0.0 : apply(head), static_cast<double>(fine)};
}

double SumModel::tail_variance(std::size_t i) const {
  double v = 0.0;
  for (std::size_t j = i; j < sigma_.size(); ++j) {
    v += sigma_[j] * sigma_[j];
  }
  return scale_ * scale_ * v;
}

VarianceProfile SumModel::tail_variance_profile() const {
  std::vector<double> c(sigma_.size() + 1, 0.0);
  for (std::size_t i = sigma_.size(); i-- > 0;) {
    c[i] = c[i + 1] + scale_ * scale_ * sigma_[i] * sigma_[i];
  }
  return VarianceProfile(std::move(c));
}

RedrawDistribution SumModel::recommended_q() const {
  std::vector<double> q(sigma_.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = sigma_[i] / sigma_[0];
  }
  q[0] = 1.0;
  return RedrawDistribution(std::move(q));
}

SumModel::Sampler standard_normal_sampler() {
  return [](Stream& rng) { return rng.normal(); };
}

SumModel sum_model(std::size_t d, SumModel::Sampler sampler) {
  if (d == 0) {
    throw InvalidParameter("sum: dimension must be at least 1");
  }
  return SumModel("sum", std::vector<double>(d, 1.0), 1.0 / std::sqrt(static_cast<double>(d)),
                  [](double s) { return s; }, std::move(sampler));
}

SumModel lipschitz_sum_model(std::vector<double> sigma, SumModel::Transform g) {
  for (std::size_t j = 0; j + 1 < sigma.size(); ++j) {
    if (sigma[j + 1] > sigma[j]) {
      throw InvalidParameter("lipschitz_sum: sigma must be decreasing");
    }
  }
  return SumModel("lipschitz_sum", std::move(sigma), 1.0, std::move(g), standard_normal_sampler());
}

SumModel::Transform call_payoff(double strike) {
  return [strike](double s) { return std::max(s - strike, 0.0); };
}

}  // namespace rdr
