#pragma once

#include <concepts>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rdr/errors.hpp"
#include "rdr/model.hpp"
#include "rdr/random.hpp"

namespace rdr {

/// A Markov chain X_{i+1} = g_i(X_i, Y_i), 0 <= i < d, with deterministic
/// X_0, independent drivers Y_i, and output g(X_d).
///
/// draw() fills a driver in place so that drivers owning buffers can reuse
/// their capacity.
template <class C>
concept MarkovChain = std::copy_constructible<C> &&
    requires(C& chain, const C& cchain, const typename C::State& x, typename C::Driver& y, std::size_t step,
             Stream& rng) {
  { cchain.horizon() } -> std::convertible_to<std::size_t>;
  { cchain.initial_state() } -> std::convertible_to<typename C::State>;
  chain.draw(step, rng, y);
  { cchain.transition(step, x, std::as_const(y)) } -> std::convertible_to<typename C::State>;
  { cchain.output(x) } -> std::convertible_to<double>;
  { cchain.name() } -> std::convertible_to<std::string>;
  { cchain.default_period() } -> std::convertible_to<std::size_t>;
};

/// Average of g(X_t) over t = d, d - period, d - 2 period, ... along one
/// trajectory (ceil(d / period) terms). Biased for transient chains.
template <MarkovChain Chain>
Evaluation long_run_average(Chain& chain, std::size_t period, Stream& rng) {
  const std::size_t d = chain.horizon();
  if (period == 0 || period >= d) {
    throw InvalidParameter("long_run_average: period must be in [1, d)");
  }
  typename Chain::Driver y{};
  auto x = chain.initial_state();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t step = 0; step < d; ++step) {
    chain.draw(step, rng, y);
    x = chain.transition(step, x, y);
    if ((d - (step + 1)) % period == 0) {
      sum += chain.output(x);
      ++count;
    }
  }
  return {sum / static_cast<double>(count), static_cast<double>(d)};
}

/// Prefix model of a Markov chain under time reversal: U_i = Y_{d-i}, so the
/// most recent drivers become the leading, most frequently redrawn inputs.
///
/// The full trajectory X_0..X_d and all drivers are stored; redraw_prefix(i)
/// regenerates Y_{d-i}..Y_{d-1} and recomputes X_{d-i+1}..X_d from the stored
/// X_{d-i}. Truncated evaluation restarts the chain at X_0 at step d - m.
template <MarkovChain Chain>
class ReversedChainModel final : public PrefixModel, public LongRunCapable {
 public:
  using State = typename Chain::State;
  using Driver = typename Chain::Driver;

  explicit ReversedChainModel(Chain chain)
      : chain_(std::move(chain)),
        d_(chain_.horizon()),
        states_(d_ + 1, chain_.initial_state()),
        drivers_(d_),
        scratch_(d_),
        scratch_alt_(d_) {
    if (d_ == 0) {
      throw InvalidParameter(chain_.name() + ": horizon must be at least 1");
    }
  }

  std::size_t dimension() const override { return d_; }
  std::string name() const override { return chain_.name(); }

  Evaluation fresh_eval(Stream& rng) override {
    states_[0] = chain_.initial_state();
    advance_stored(0, rng);
    return {chain_.output(states_[d_]), static_cast<double>(d_)};
  }

  Evaluation redraw_prefix(std::size_t i, Stream& rng) override {
    if (i == 0 || i > d_) {
      throw InvalidParameter(chain_.name() + ": redraw size out of range");
    }
    advance_stored(d_ - i, rng);
    return {chain_.output(states_[d_]), static_cast<double>(i)};
  }

  SplicedValues mixed_eval(std::size_t i, Stream& rng) override {
    if (i >= d_) {
      throw InvalidParameter(chain_.name() + ": mixed_eval index must be below d");
    }
    const std::size_t split = d_ - i;  // steps [0, split) carry the tail inputs
    const State tail = run_fresh(split, rng);
    draw_steps(split, scratch_, rng);
    const State tail1 = run_fresh(split, rng);
    draw_steps(split, scratch_alt_, rng);
    const State tail2 = run_fresh(split, rng);
    return {run_from(split, tail, scratch_), run_from(split, tail1, scratch_), run_from(split, tail, scratch_alt_),
            run_from(split, tail2, scratch_alt_), 3.0 * static_cast<double>(d_)};
  }

  Evaluation truncated_eval(std::size_t m, Stream& rng) override {
    if (m > d_) {
      throw InvalidParameter(chain_.name() + ": truncation index exceeds d");
    }
    draw_reversed(m, rng);
    return {run_from(d_ - m, chain_.initial_state(), scratch_), static_cast<double>(m)};
  }

  LevelPair coupled_levels(std::size_t fine, std::size_t coarse, Stream& rng) override {
    if (fine > d_ || coarse > fine) {
      throw InvalidParameter(chain_.name() + ": invalid level pair");
    }
    draw_reversed(fine, rng);
    const double phi_fine = run_from(d_ - fine, chain_.initial_state(), scratch_);
    const double phi_coarse = coarse == 0 ? 0.0 : run_from(d_ - coarse, chain_.initial_state(), scratch_);
    return {phi_fine, phi_coarse, static_cast<double>(fine)};
  }

  std::unique_ptr<PrefixModel> clone() const override { return std::make_unique<ReversedChainModel>(*this); }

  std::size_t default_period() const override { return chain_.default_period(); }

  Evaluation long_run_average(std::size_t period, Stream& rng) override {
    return rdr::long_run_average(chain_, period, rng);
  }

  const Chain& chain() const noexcept { return chain_; }
  const std::vector<State>& states() const noexcept { return states_; }
  const std::vector<Driver>& drivers() const noexcept { return drivers_; }

  /// Recomputes the trajectory from X_0 and the stored drivers and compares
  /// it bitwise with the stored states.
  bool consistent() const {
    State x = chain_.initial_state();
    if (!(x == states_[0])) {
      return false;
    }
    for (std::size_t step = 0; step < d_; ++step) {
      x = chain_.transition(step, x, drivers_[step]);
      if (!(x == states_[step + 1])) {
        return false;
      }
    }
    return true;
  }

 private:
  void advance_stored(std::size_t from, Stream& rng) {
    for (std::size_t step = from; step < d_; ++step) {
      chain_.draw(step, rng, drivers_[step]);
      states_[step + 1] = chain_.transition(step, states_[step], drivers_[step]);
    }
  }

  // Runs steps [0, until) from X_0 on fresh drivers, without storing them.
  State run_fresh(std::size_t until, Stream& rng) {
    State x = chain_.initial_state();
    for (std::size_t step = 0; step < until; ++step) {
      chain_.draw(step, rng, transient_);
      x = chain_.transition(step, x, transient_);
    }
    return x;
  }

  void draw_steps(std::size_t from, std::vector<Driver>& into, Stream& rng) {
    for (std::size_t step = from; step < d_; ++step) {
      chain_.draw(step, rng, into[step]);
    }
  }

  // Draws U_1..U_m, i.e. Y_{d-1} down to Y_{d-m}, in input order.
  void draw_reversed(std::size_t m, Stream& rng) {
    for (std::size_t j = 1; j <= m; ++j) {
      chain_.draw(d_ - j, rng, scratch_[d_ - j]);
    }
  }

  double run_from(std::size_t from, State x, const std::vector<Driver>& drivers) const {
    for (std::size_t step = from; step < d_; ++step) {
      x = chain_.transition(step, x, drivers[step]);
    }
    return chain_.output(x);
  }

  Chain chain_;
  std::size_t d_;
  std::vector<State> states_;
  std::vector<Driver> drivers_;
  std::vector<Driver> scratch_;
  std::vector<Driver> scratch_alt_;
  Driver transient_{};
};

template <MarkovChain Chain>
ReversedChainModel<Chain> reverse(Chain chain) {
  return ReversedChainModel<Chain>(std::move(chain));
}

}  // namespace rdr
