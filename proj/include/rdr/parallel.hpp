#pragma once

#include <omp.h>

#include <cstddef>
#include <cstdint>
#include <exception>
#include <memory>
#include <type_traits>
#include <vector>

#include "rdr/model.hpp"
#include "rdr/random.hpp"

namespace rdr {

/// Runs fn(model, r) for r = 0..reps-1 on one clone of `prototype`. Results
/// are stored by index.
template <class Fn>
auto replicate_serial(const PrefixModel& prototype, std::size_t reps, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, PrefixModel&, std::size_t>> {
  std::vector<std::invoke_result_t<Fn&, PrefixModel&, std::size_t>> out(reps);
  std::unique_ptr<PrefixModel> model = prototype.clone();
  for (std::size_t r = 0; r < reps; ++r) {
    out[r] = fn(*model, r);
  }
  return out;
}

/// OpenMP version of replicate_serial: one clone per thread, results stored
/// by index, so the output equals the serial one whenever fn(model, r)
/// depends only on r. The first exception thrown (lowest index among those
/// observed) is rethrown after the loop.
template <class Fn>
auto replicate_parallel(const PrefixModel& prototype, std::size_t reps, Fn&& fn, int threads = 0)
    -> std::vector<std::invoke_result_t<Fn&, PrefixModel&, std::size_t>> {
  std::vector<std::invoke_result_t<Fn&, PrefixModel&, std::size_t>> out(reps);
  const int workers = threads > 0 ? threads : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(reps);
  std::exception_ptr error;
  std::int64_t error_index = n;
#pragma omp parallel num_threads(workers)
  {
    std::unique_ptr<PrefixModel> model = prototype.clone();
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t r = 0; r < n; ++r) {
      try {
        out[static_cast<std::size_t>(r)] = fn(*model, static_cast<std::size_t>(r));
      } catch (...) {
#pragma omp critical(rdr_replicate_error)
        if (r < error_index) {
          error_index = r;
          error = std::current_exception();
        }
      }
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
  return out;
}

/// Running mean and M2 (Welford), mergeable in a fixed order.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) noexcept {
    if (other.count == 0) {
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) / total;
    count += other.count;
  }

  /// Unbiased sample variance.
  double variance() const noexcept { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
};

inline constexpr std::size_t kSampleBlock = 1000;

/// Moments of f(U) over `samples` fresh evaluations, in blocks of
/// kSampleBlock drawn from rng.substream(block).
Moments sample_moments_serial(const PrefixModel& prototype, std::size_t samples, const Stream& rng);
Moments sample_moments_parallel(const PrefixModel& prototype, std::size_t samples, const Stream& rng,
                                int threads = 0);

}  // namespace rdr
