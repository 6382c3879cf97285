#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "rdr/errors.hpp"
#include "rdr/models/garch.hpp"
#include "rdr/models/gtd1.hpp"
#include "rdr/models/mtgi1.hpp"

namespace rdr {

GarchChain::GarchChain(const GarchParams& params) : p_(params) {
  if (!(p_.w > 0.0 && p_.alpha > 0.0 && p_.beta > 0.0)) {
    throw InvalidParameter("garch: w, alpha and beta must be positive");
  }
  if (!(p_.alpha + p_.beta < 1.0)) {
    throw InvalidParameter("garch: alpha + beta must be below 1");
  }
  if (!(p_.x0 >= 0.0)) {
    throw InvalidParameter("garch: x0 must be nonnegative");
  }
  if (p_.d == 0) {
    throw InvalidParameter("garch: d must be at least 1");
  }
}

double SinusoidalRate::operator()(double s) const {
  return base + amplitude * std::cos(2.0 * std::numbers::pi * s / period);
}

Gtd1Chain::Gtd1Chain(const Gtd1Params& params)
    : d_(params.d),
      arrivals_(),
      threshold_output_(params.threshold_output),
      threshold_(params.threshold),
      period_(params.period) {
  if (d_ == 0) {
    throw InvalidParameter("gtd1: d must be at least 1");
  }
  if (!params.rate) {
    throw InvalidParameter("gtd1: rate function is required");
  }
  arrivals_.reserve(d_);
  for (std::size_t step = 0; step < d_; ++step) {
    const double lambda = params.rate(step + 1);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw InvalidParameter("gtd1: lambda_" + std::to_string(step + 1) + " must be positive");
    }
    arrivals_.emplace_back(lambda);
  }
}

MtGi1Chain::MtGi1Chain(MtGi1Params params) : p_(std::move(params)) {
  if (!(p_.theta > 0.0) || !(p_.lambda_star > 0.0)) {
    throw InvalidParameter("mtgi1: theta and lambda_star must be positive");
  }
  if (!(p_.pareto_alpha > 0.0)) {
    throw InvalidParameter("mtgi1: pareto alpha must be positive");
  }
  if (!p_.rate) {
    throw InvalidParameter("mtgi1: rate function is required");
  }
  d_ = p_.d != 0 ? p_.d : static_cast<std::size_t>(std::ceil(p_.theta));
  if (d_ == 0) {
    throw InvalidParameter("mtgi1: d must be at least 1");
  }
  h_ = p_.theta / static_cast<double>(d_);
  // The thinning bound must dominate the rate; check on a grid fine enough to
  // catch a violation of a smooth rate.
  const std::size_t probes = 16 * d_ + 1;
  for (std::size_t k = 0; k < probes; ++k) {
    const double s = p_.theta * static_cast<double>(k) / static_cast<double>(probes - 1);
    const double lambda = p_.rate(s);
    if (!(lambda > 0.0) || lambda > p_.lambda_star * (1.0 + 1e-12)) {
      throw InvalidParameter("mtgi1: rate must lie in (0, lambda_star] (violated at s = " + std::to_string(s) + ")");
    }
  }
}

double MtGi1Chain::pareto_service(double u) const { return p_.pareto_alpha * (1.0 / std::cbrt(1.0 - u) - 1.0); }

void MtGi1Chain::draw(std::size_t step, Stream& rng, Driver& y) {
  y.arrivals.clear();
  const double start = static_cast<double>(step) * h_;
  const double end = static_cast<double>(step + 1) * h_;
  double s = start;
  for (;;) {
    s += rng.exponential(p_.lambda_star);
    if (s > end) {
      break;
    }
    if (rng.uniform() * p_.lambda_star < p_.rate(s)) {
      y.arrivals.push_back({s, pareto_service(rng.uniform())});
    }
  }
}

double advance_workload(double w, double start, double end, const std::vector<Arrival>& arrivals) noexcept {
  double prev = start;
  for (const Arrival& a : arrivals) {
    const double drained = w - (a.time - prev);
    w = a.service + (drained > 0.0 ? drained : 0.0);
    prev = a.time;
  }
  const double drained = w - (end - prev);
  return drained > 0.0 ? drained : 0.0;
}

MtGi1Chain::State MtGi1Chain::transition(std::size_t step, State w, const Driver& y) const noexcept {
  return advance_workload(w, static_cast<double>(step) * h_, static_cast<double>(step + 1) * h_, y.arrivals);
}

}  // namespace rdr
