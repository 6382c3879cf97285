#include "rdr/profiles.hpp"

#include <cmath>
#include <string>

#include "rdr/errors.hpp"

namespace rdr {

RedrawDistribution::RedrawDistribution(std::vector<double> q) : q_(std::move(q)) {
  if (q_.empty()) {
    throw InvalidParameter("redraw distribution: dimension must be at least 1");
  }
  if (q_[0] != 1.0) {
    throw InvalidParameter("redraw distribution: q_0 must equal 1");
  }
  for (std::size_t i = 0; i + 1 < q_.size(); ++i) {
    if (!(q_[i + 1] <= q_[i])) {
      throw InvalidParameter("redraw distribution: q must be decreasing (q_" + std::to_string(i + 1) + " > q_" +
                             std::to_string(i) + ")");
    }
  }
  if (!(q_.back() > 0.0)) {
    throw InvalidParameter("redraw distribution: q_{d-1} must be positive");
  }
}

RedrawDistribution RedrawDistribution::ones(std::size_t d) { return RedrawDistribution(std::vector<double>(d, 1.0)); }

CostProfile::CostProfile(std::vector<double> t) : t_(std::move(t)) {
  if (t_.size() < 2) {
    throw InvalidParameter("cost profile: need t_0..t_d with d >= 1");
  }
  if (t_[0] != 0.0) {
    throw InvalidParameter("cost profile: t_0 must be 0");
  }
  for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
    if (!(t_[i] < t_[i + 1]) || !std::isfinite(t_[i + 1])) {
      throw InvalidParameter("cost profile: t must be strictly increasing (at index " + std::to_string(i + 1) + ")");
    }
  }
}

CostProfile CostProfile::linear(std::size_t d) {
  std::vector<double> t(d + 1);
  for (std::size_t i = 0; i <= d; ++i) {
    t[i] = static_cast<double>(i);
  }
  return CostProfile(std::move(t));
}

VarianceProfile::VarianceProfile(std::vector<double> nu, Unchecked) : nu_(std::move(nu)) {
  if (nu_.size() < 2) {
    throw InvalidParameter("variance profile: need nu_0..nu_d with d >= 1");
  }
  if (nu_.back() != 0.0) {
    throw InvalidParameter("variance profile: nu_d must be 0");
  }
  for (std::size_t i = 0; i < nu_.size(); ++i) {
    if (!(nu_[i] >= 0.0) || !std::isfinite(nu_[i])) {
      throw InvalidParameter("variance profile: entries must be finite and nonnegative (index " + std::to_string(i) +
                             ")");
    }
  }
}

VarianceProfile::VarianceProfile(std::vector<double> nu) : VarianceProfile(std::move(nu), Unchecked{}) {
  for (std::size_t i = 0; i + 1 < nu_.size(); ++i) {
    if (nu_[i] < nu_[i + 1]) {
      throw InvalidParameter("variance profile: nu must be decreasing (nu_" + std::to_string(i + 1) + " > nu_" +
                             std::to_string(i) + "); repair the profile first");
    }
  }
}

VarianceProfile VarianceProfile::relaxed(std::vector<double> nu) { return VarianceProfile(std::move(nu), Unchecked{}); }

}  // namespace rdr
