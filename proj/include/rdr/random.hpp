#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace rdr {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept {
  return mix64(seed ^ mix64(value + 0x632be59bd9b4e019ULL));
}

/// FNV-1a over a byte string, used to turn names into experiment ids.
constexpr std::uint64_t hash_string(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Philox4x32-10 (Salmon et al., SC'11). The 128-bit counter is split into a
/// 64-bit position and a 64-bit stream id, so each key carries 2^64
/// independent streams of 2^66 32-bit words.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  Philox4x32(std::uint64_t key, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        stream_(stream) {}

  result_type operator()() noexcept {
    if (used_ == 2) {
      refill();
    }
    return out_[used_++];
  }

  std::uint64_t key() const noexcept {
    return static_cast<std::uint64_t>(key_[1]) << 32 | key_[0];
  }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Raw block function, exposed for known-answer tests.
  static Block block(Block counter, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9U;
        key[1] += 0xBB67AE85U;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53U} * counter[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57U} * counter[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    }
    return counter;
  }

 private:
  void refill() noexcept {
    const Block ctr{static_cast<std::uint32_t>(position_), static_cast<std::uint32_t>(position_ >> 32),
                    static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const Block r = block(ctr, key_);
    out_[0] = static_cast<std::uint64_t>(r[1]) << 32 | r[0];
    out_[1] = static_cast<std::uint64_t>(r[3]) << 32 | r[2];
    ++position_;
    used_ = 0;
  }

  Key key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> out_{};
  int used_ = 2;
};

/// A reproducible random stream. Copying a Stream copies its full state, so a
/// copy replays exactly the same draws.
class Stream {
 public:
  explicit Stream(std::uint64_t key, std::uint64_t stream_id = 0) : engine_(key, stream_id) {}

  /// Stream `replication` of experiment `experiment_id` under `master_seed`.
  static Stream derive(std::uint64_t master_seed, std::uint64_t experiment_id, std::uint64_t replication) {
    return Stream(hash_combine(master_seed, experiment_id), replication);
  }

  /// Independent child stream, deterministic in (this stream's identity, id).
  Stream substream(std::uint64_t id) const {
    return Stream(hash_combine(hash_combine(engine_.key(), engine_.stream()), id), id);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(engine_); }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  int poisson(const std::poisson_distribution<int>::param_type& p) { return poisson_(engine_, p); }

  Philox4x32& engine() noexcept { return engine_; }

 private:
  Philox4x32 engine_;
  std::normal_distribution<double> normal_;
  std::poisson_distribution<int> poisson_;
};

}  // namespace rdr
