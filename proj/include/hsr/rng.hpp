#pragma once

#include <cstdint>
#include <random>

namespace hsr {

// Deterministic named substreams derived from one root seed, so enabling or
// disabling one consumer (e.g. shadowing) never shifts another stream's draws.
class SplitRng {
 public:
  enum class Stream : std::uint64_t { Scenario = 1, Shadowing = 2, TieBreak = 3 };

  SplitRng(std::uint64_t root_seed, Stream stream);

  double uniform(double lo, double hi);           // [lo, hi)
  std::uint64_t uniform_index(std::uint64_t n);   // [0, n), unbiased
  double normal(double mean, double stddev);

 private:
  std::uint64_t next_bits();

  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace hsr
