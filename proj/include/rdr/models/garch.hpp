#pragma once

#include <cstddef>
#include <string>

#include "rdr/random.hpp"

namespace rdr {

struct GarchParams {
  double w = 1.76e-6;
  double alpha = 0.06;
  double beta = 0.9;
  double x0 = 1e-4;
  double z = 4.4e-5;
  std::size_t d = 1250;
  /// Output 1{X_d > z} when true, X_d otherwise.
  bool threshold_output = true;
};

/// GARCH(1,1) daily variance: X_{i+1} = w + alpha X_i Y_i^2 + beta X_i with
/// standard Gaussian Y_i.
class GarchChain {
 public:
  using State = double;
  using Driver = double;

  explicit GarchChain(const GarchParams& params);

  std::size_t horizon() const noexcept { return p_.d; }
  State initial_state() const noexcept { return p_.x0; }
  void draw(std::size_t, Stream& rng, Driver& y) { y = rng.normal(); }
  State transition(std::size_t, State x, Driver y) const noexcept {
    return p_.w + p_.alpha * x * y * y + p_.beta * x;
  }
  double output(State x) const noexcept { return p_.threshold_output ? (x > p_.z ? 1.0 : 0.0) : x; }
  std::string name() const { return "garch"; }
  std::size_t default_period() const noexcept { return 1; }

  const GarchParams& params() const noexcept { return p_; }

 private:
  GarchParams p_;
};

}  // namespace rdr
