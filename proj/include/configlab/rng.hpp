#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace configlab {

// Counter-based RNG (Philox4x32-10, Salmon et al. SC'11). Every draw is a
// pure function of (seed, stream, index, position), so Monte Carlo loops can
// be partitioned across any number of workers without changing the result.
class Philox {
public:
  explicit Philox(std::uint64_t seed, std::uint32_t stream = 0)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_(stream) {}

  std::array<std::uint32_t, 4> block(std::uint64_t index, std::uint32_t sub) const {
    std::array<std::uint32_t, 4> c = {sub, static_cast<std::uint32_t>(index),
                                      static_cast<std::uint32_t>(index >> 32), stream_};
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = kMulA * static_cast<std::uint64_t>(c[0]);
      const std::uint64_t p1 = kMulB * static_cast<std::uint64_t>(c[2]);
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
      k0 += kWeylA;
      k1 += kWeylB;
    }
    return c;
  }

private:
  static constexpr std::uint32_t kMulA = 0xD2511F53;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85;

  std::uint32_t key0_, key1_, stream_;
};

// Sequential view of the draws belonging to one (seed, stream, index) triple.
// Cheap to construct per loop iteration; one Philox block feeds two doubles.
class IndexStream {
public:
  IndexStream(const Philox& rng, std::uint64_t index)
      : rng_(&rng), index_(index) {}

  // uniform in [0,1): 53-bit mantissa from two 32-bit words
  double u01() {
    if (pos_ == 0) {
      buf_ = rng_->block(index_, sub_++);
      pos_ = 2;
    }
    const int base = (pos_ == 2) ? 0 : 2;
    --pos_;
    const std::uint64_t hi = buf_[base], lo = buf_[base + 1];
    const std::uint64_t bits53 = (hi << 21 | lo >> 11) & ((std::uint64_t(1) << 53) - 1);
    return static_cast<double>(bits53) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  std::uint64_t index_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(u01() * static_cast<double>(n)) % n;
  }

  // standard normal, Box-Muller (consumes two uniforms per pair)
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = u01(), u2 = u01();
    if (u1 <= 0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

private:
  const Philox* rng_;
  std::uint64_t index_;
  std::array<std::uint32_t, 4> buf_{};
  std::uint32_t sub_ = 0;
  int pos_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stream ids; one per sampler so different uses of a seed never collide.
namespace streams {
inline constexpr std::uint32_t kIfsDigits = 1;
inline constexpr std::uint32_t kUniformBox = 2;
inline constexpr std::uint32_t kSphereDirection = 3;
inline constexpr std::uint32_t kLattice = 4;
inline constexpr std::uint32_t kPairSample = 5;
inline constexpr std::uint32_t kBallCenters = 6;
inline constexpr std::uint32_t kFourierDirection = 7;
inline constexpr std::uint32_t kEnsembleCheck = 8;
inline constexpr std::uint32_t kCircle = 9;
inline constexpr std::uint32_t kParamSpace = 10;
inline constexpr std::uint32_t kProductResample = 11;
}  // namespace streams

// SplitMix64; used to derive per-measure seeds from an experiment seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace configlab
