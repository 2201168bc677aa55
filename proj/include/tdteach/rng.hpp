#pragma once

#include <cstdint>
#include <cstddef>

namespace tdteach {

/// SplitMix64 generator (Steele, Lea & Flood, 2014).
///
/// Each call advances the state by the golden-ratio increment
/// 0x9E3779B97F4A7C15 and returns the state passed through the
/// mixing function
///
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z =  z ^ (z >> 31)
///
/// Derived draws are fixed so any implementation can replay a run:
///   uniform01()  = (next() >> 11) * 2^-53          in [0, 1)
///   below(n)     = high 64 bits of next() * n      in [0, n)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    __extension__ using u128 = unsigned __int128;
    const u128 wide = static_cast<u128>(next()) * static_cast<u128>(n);
    return static_cast<std::size_t>(wide >> 64);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace tdteach
