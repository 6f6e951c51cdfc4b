#pragma once

#include <cstdint>

namespace fermikit {

// SplitMix64 stream. Streams derived with split() are independent of the parent's
// position, so work can be partitioned over threads without changing results.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64();
  // Uniform on (0, 1].
  double uniform();
  RngStream split(std::uint64_t key) const;

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace fermikit
