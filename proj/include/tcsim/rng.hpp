#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace tcsim {

// Identifies one deterministic random stream. Distinct (lane, index) pairs
// under the same root yield statistically independent streams; the same key
// always reproduces the same draws.
struct StreamKey {
  std::uint64_t root = 0;
  std::string lane;
  std::uint64_t index = 0;

  StreamKey sub(std::string_view suffix) const {
    StreamKey k = *this;
    k.lane += '.';
    k.lane += suffix;
    return k;
  }
  StreamKey with_index(std::uint64_t i) const {
    StreamKey k = *this;
    k.index = i;
    return k;
  }
  // Fresh indexable family derived from the whole key (root, lane, index),
  // for samplers that fan out internally without clobbering the caller's
  // path index.
  StreamKey child(std::string_view family) const;
};

// xoshiro256++ seeded by splitmix64 over (root, fnv1a(lane), index).
// Distributions are implemented here rather than taken from <random> so that
// streams are identical across standard-library versions.
class Rng {
 public:
  explicit Rng(const StreamKey& key);
  Rng(std::uint64_t root, std::string_view lane, std::uint64_t index);

  std::uint64_t next_u64();
  double uniform();      // [0, 1)
  double uniform_pos();  // (0, 1]
  double normal();       // standard normal (Box-Muller, spare cached)
  double exponential();  // rate 1
  std::int64_t poisson(double mean);
  std::int64_t binomial(std::int64_t n, double p);

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tcsim
