#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace bvc {

// Philox-4x32 with 10 rounds (Salmon et al., SC'11): a pure function from
// (counter, key) to four 32-bit words. Counter-based, so any trial of any
// stream can be generated independently and in any order.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Keyed façade: one 128-bit block per (stream, index), split into two
// 64-bit draws. Streams with distinct (stream, index) never collide, which
// is what makes parallel and serial runs bit-identical.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::pair<std::uint64_t, std::uint64_t> draw(std::uint64_t stream,
                                               std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// 53-bit uniform in [0, 1).
double to_unit_double(std::uint64_t bits);

}  // namespace bvc
