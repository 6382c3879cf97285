#include "rdr/parallel.hpp"

#include <algorithm>

namespace rdr {

namespace {

Moments sample_block(PrefixModel& model, std::size_t block, std::size_t samples, const Stream& rng) {
  Stream sub = rng.substream(block);
  const std::size_t begin = block * kSampleBlock;
  const std::size_t end = std::min(samples, begin + kSampleBlock);
  Moments m;
  for (std::size_t s = begin; s < end; ++s) {
    m.add(model.fresh_eval(sub).value);
  }
  return m;
}

std::size_t block_count(std::size_t samples) { return (samples + kSampleBlock - 1) / kSampleBlock; }

}  // namespace

Moments sample_moments_serial(const PrefixModel& prototype, std::size_t samples, const Stream& rng) {
  std::unique_ptr<PrefixModel> model = prototype.clone();
  Moments total;
  for (std::size_t b = 0; b < block_count(samples); ++b) {
    total.merge(sample_block(*model, b, samples, rng));
  }
  return total;
}

Moments sample_moments_parallel(const PrefixModel& prototype, std::size_t samples, const Stream& rng, int threads) {
  const std::vector<Moments> blocks = replicate_parallel(
      prototype, block_count(samples),
      [&](PrefixModel& model, std::size_t b) { return sample_block(model, b, samples, rng); }, threads);
  Moments total;
  for (const Moments& m : blocks) {
    total.merge(m);
  }
  return total;
}

}  // namespace rdr
