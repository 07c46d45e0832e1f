#include "tcsim/rng.hpp"

#include <cmath>

#include "tcsim/errors.hpp"

namespace tcsim {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Rng::Rng(std::uint64_t root, std::string_view lane, std::uint64_t index) {
  std::uint64_t x = root;
  x ^= splitmix64(x) ^ fnv1a(lane);
  x ^= splitmix64(x) ^ (index * 0xD6E8FEB86659FD93ULL + 0xA5A5A5A5A5A5A5A5ULL);
  for (auto& w : s_) w = splitmix64(x);
  // All-zero state is unreachable for xoshiro only if seeding avoids it.
  if (s_[0] == 0 && s_[1] == 0 && s_[2] == 0 && s_[3] == 0) s_[0] = 1;
}

Rng::Rng(const StreamKey& key) : Rng(key.root, key.lane, key.index) {}

StreamKey StreamKey::child(std::string_view family) const {
  StreamKey k;
  k.root = Rng(root, lane + "\x1f" + std::string(family), index).next_u64();
  k.lane = family;
  k.index = 0;
  return k;
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() { return 1.0 - uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

double Rng::exponential() { return -std::log(uniform_pos()); }

std::int64_t Rng::poisson(double mean) {
  if (mean < 0 || !std::isfinite(mean)) throw DomainError("poisson: mean must be finite and >= 0");
  std::int64_t total = 0;
  // Knuth inversion is exact but needs exp(-mean) to stay representable;
  // larger means are split into independent chunks.
  while (mean > 30.0) {
    const double chunk = 15.0;
    mean -= chunk;
    const double limit = std::exp(-chunk);
    double p = 1.0;
    std::int64_t k = 0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    total += k - 1;
  }
  const double limit = std::exp(-mean);
  double p = 1.0;
  std::int64_t k = 0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit);
  return total + k - 1;
}

std::int64_t Rng::binomial(std::int64_t n, double p) {
  if (n < 0 || p < 0.0 || p > 1.0) throw DomainError("binomial: need n >= 0 and p in [0,1]");
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < n; ++i)
    if (uniform() < p) ++hits;
  return hits;
}

}  // namespace tcsim
