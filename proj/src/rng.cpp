#include "hsr/rng.hpp"

#include <cmath>
#include <numbers>

namespace hsr {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitRng::SplitRng(std::uint64_t root_seed, Stream stream) {
  std::uint64_t state = root_seed ^ (static_cast<std::uint64_t>(stream) * 0xD6E8FEB86659FD93ULL);
  engine_.seed(splitmix64(state));
}

std::uint64_t SplitRng::next_bits() { return engine_(); }

double SplitRng::uniform(double lo, double hi) {
  const double unit = static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

std::uint64_t SplitRng::uniform_index(std::uint64_t n) {
  if (n <= 1) {
    return 0;
  }
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t bits = next_bits();
  while (bits >= limit) {
    bits = next_bits();
  }
  return bits % n;
}

double SplitRng::normal(double mean, double stddev) {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return mean + stddev * spare_normal_;
  }
  double u1 = uniform(0.0, 1.0);
  while (u1 <= 0.0) {
    u1 = uniform(0.0, 1.0);
  }
  const double u2 = uniform(0.0, 1.0);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return mean + stddev * radius * std::cos(angle);
}

}  // namespace hsr
