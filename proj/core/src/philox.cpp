#include "bvc/philox.hpp"

namespace bvc {

namespace {

constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;

inline std::uint32_t mulhilo(std::uint32_t a, std::uint32_t b,
                             std::uint32_t& lo) {
  std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  return static_cast<std::uint32_t>(product >> 32);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, lo1;
    std::uint32_t hi0 = mulhilo(kMul0, counter[0], lo0);
    std::uint32_t hi1 = mulhilo(kMul1, counter[2], lo1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return counter;
}

std::pair<std::uint64_t, std::uint64_t> CounterRng::draw(
    std::uint64_t stream, std::uint64_t index) const {
  std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                      static_cast<std::uint32_t>(seed_ >> 32)};
  std::array<std::uint32_t, 4> block = philox4x32(counter, key);
  std::uint64_t first =
      (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
  std::uint64_t second =
      (static_cast<std::uint64_t>(block[3]) << 32) | block[2];
  return {first, second};
}

double to_unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1p-53;
}

}  // namespace bvc
