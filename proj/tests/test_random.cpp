#include <doctest.h>

#include <set>
#include <vector>

#include "oracles.hpp"
#include "rdr/random.hpp"

using rdr::Philox4x32;
using rdr::Stream;

TEST_CASE("philox known answers") {
  // Reference vectors distributed with Random123.
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) ==
        Philox4x32::Block{0x6627e8d5U, 0xe169c58dU, 0xbc57ac4cU, 0x9b00dbd8U});
  CHECK(Philox4x32::block({0xffffffffU, 0xffffffffU, 0xffffffffU, 0xffffffffU}, {0xffffffffU, 0xffffffffU}) ==
        Philox4x32::Block{0x408f276dU, 0x41c83b0eU, 0xa20bc7c6U, 0x6d5451fdU});
  CHECK(Philox4x32::block({0x243f6a88U, 0x85a308d3U, 0x13198a2eU, 0x03707344U}, {0xa4093822U, 0x299f31d0U}) ==
        Philox4x32::Block{0xd16cfe09U, 0x94fdccebU, 0x5001e420U, 0x24126ea1U});
}

TEST_CASE("copied stream replays its draws") {
  Stream a(42, 7);
  a.normal();
  Stream b = a;
  for (int k = 0; k < 100; ++k) {
    CHECK(a.normal() == b.normal());
    CHECK(a.uniform() == b.uniform());
  }
}

TEST_CASE("derived streams differ across replication and experiment") {
  std::set<double> firsts;
  for (std::uint64_t exp = 0; exp < 10; ++exp) {
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
      firsts.insert(Stream::derive(1, exp, rep).uniform());
    }
  }
  CHECK(firsts.size() == 1000);
  CHECK(Stream::derive(1, 2, 3).uniform() == Stream::derive(1, 2, 3).uniform());
  CHECK(Stream::derive(1, 2, 3).uniform() != Stream::derive(2, 2, 3).uniform());
}

TEST_CASE("substreams are deterministic and distinct") {
  const Stream parent(5, 1);
  CHECK(parent.substream(3).substream(0).uniform() == parent.substream(3).substream(0).uniform());
  CHECK(parent.substream(3).uniform() != parent.substream(4).uniform());
}

TEST_CASE("uniform lies in [0, 1) with the right moments") {
  Stream s(9);
  std::vector<double> x(200000);
  for (double& v : x) {
    v = s.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
  const auto sum = oracle::summarize(x);
  CHECK(std::abs(sum.mean - 0.5) < 4 * std::sqrt(1.0 / 12.0 / x.size()));
  CHECK(std::abs(sum.variance - 1.0 / 12.0) < 0.002);
}

TEST_CASE("normal and exponential moments") {
  Stream s(11);
  std::vector<double> z(200000);
  std::vector<double> e(200000);
  for (std::size_t k = 0; k < z.size(); ++k) {
    z[k] = s.normal();
    e[k] = s.exponential(2.0);
  }
  const auto zs = oracle::summarize(z);
  const auto es = oracle::summarize(e);
  CHECK(std::abs(zs.mean) < 4 * zs.se);
  CHECK(std::abs(zs.variance - 1.0) < 0.02);
  CHECK(std::abs(es.mean - 0.5) < 4 * es.se);
}
