#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "rdr/random.hpp"

namespace rdr {

/// Value of f at the current copy together with the cost charged for producing
/// it, in input-draw units.
struct Evaluation {
  double value;
  double cost;
};

/// The four evaluations needed to estimate C(i), for independent input blocks
/// U, U' and a tail-only block U'':
///   original        f(U_1..U_i,   U_{i+1}..U_d)
///   tail_swapped    f(U_1..U_i,   U'_{i+1}..U'_d)
///   prefix_swapped  f(U'_1..U'_i, U_{i+1}..U_d)
///   both_swapped    f(U'_1..U'_i, U''_{i+1}..U''_d)
struct SplicedValues {
  double original;
  double tail_swapped;
  double prefix_swapped;
  double both_swapped;
  double cost;
};

/// Coupled truncated evaluations phi_fine, phi_coarse sharing the leading
/// inputs U_1..U_{m_coarse}.
struct LevelPair {
  double fine;
  double coarse;
  double cost;
};

/// A simulatable f(U_1, ..., U_d) whose leading inputs can be redrawn in place.
///
/// An instance holds one current copy V of the input vector. fresh_eval draws
/// all d inputs; redraw_prefix(i) replaces U_1..U_i and leaves U_{i+1}..U_d
/// untouched. Instances are single-user; use clone() for each worker.
class PrefixModel {
 public:
  virtual ~PrefixModel() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::string name() const = 0;

  virtual Evaluation fresh_eval(Stream& rng) = 0;
  virtual Evaluation redraw_prefix(std::size_t i, Stream& rng) = 0;

  /// Draws three fresh blocks and evaluates the splices listed in
  /// SplicedValues. Does not touch the current copy. 0 <= i <= d-1.
  virtual SplicedValues mixed_eval(std::size_t i, Stream& rng) = 0;

  /// phi_m = f(U_1, ..., U_m, x, ..., x) with x the model's fill value.
  virtual Evaluation truncated_eval(std::size_t m, Stream& rng) = 0;

  /// phi_fine and phi_coarse on one shared draw of U_1..U_fine; coarse may be
  /// 0, in which case phi_0 = 0.
  virtual LevelPair coupled_levels(std::size_t fine, std::size_t coarse, Stream& rng) = 0;

  virtual std::unique_ptr<PrefixModel> clone() const = 0;
};

/// Models that are Markov chains in disguise can also produce the periodic
/// long-run average of their output along a single trajectory.
class LongRunCapable {
 public:
  virtual ~LongRunCapable() = default;
  virtual std::size_t default_period() const = 0;
  virtual Evaluation long_run_average(std::size_t period, Stream& rng) = 0;
};

}  // namespace rdr
