#pragma once

#include <cstdint>
#include <string_view>

namespace mlfc {

// FNV-1a over a label string; used to derive named substreams.
std::uint64_t hash_label(std::string_view label);

// xoshiro256++ with named-substream construction. The state is expanded
// with splitmix64 from seed ^ hash(label), so every estimator owns a
// stream that depends only on (seed, label) and not on call order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::string_view label);

  std::uint64_t next_u64();

  // Uniform in the open interval (0,1); never returns 0 or 1.
  double next_unit_open();

  // Exponential with the given mean (strictly positive draws).
  double next_exponential(double mean);

 private:
  std::uint64_t s_[4];
};

}  // namespace mlfc
