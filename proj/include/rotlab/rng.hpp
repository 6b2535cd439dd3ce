#pragma once

#include <cmath>
#include <cstdint>

namespace rotlab {

/// Counter-based pseudo-random generator (Philox-2x64, 10 rounds).
///
/// Every draw is a pure function of (key, stream, position), so sequences are
/// bitwise identical across platforms and independent of evaluation order.
/// Sub-streams partition the 128-bit counter space: stream `s` draws from
/// blocks (position, s), so two distinct streams of the same seed cannot
/// collide before 2^64 draws.
///
/// Constants are the Philox-2x64 multiplier and the 64-bit Weyl increment
/// used for key scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed)), ctr_hi_(stream) {}

  /// Independent generator for (seed, stream-id) fan-out.
  [[nodiscard]] Rng substream(std::uint64_t stream_id) const {
    Rng r(0, stream_id);
    r.key_ = key_;
    return r;
  }

  std::uint64_t seed_key() const { return key_; }
  std::uint64_t stream() const { return ctr_hi_; }
  std::uint64_t position() const { return 2 * ctr_lo_ - (have_spare_ ? 1 : 0); }

  std::uint64_t next_u64() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    std::uint64_t x0 = ctr_lo_++;
    std::uint64_t x1 = ctr_hi_;
    std::uint64_t k = key_;
    for (int round = 0; round < 10; ++round) {
      const unsigned __int128 prod =
          static_cast<unsigned __int128>(kMultiplier) * x0;
      const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
      const std::uint64_t lo = static_cast<std::uint64_t>(prod);
      x0 = hi ^ k ^ x1;
      x1 = lo;
      k += kWeyl;
    }
    spare_ = x1;
    have_spare_ = true;
    return x0;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; one pair per two uniforms.
  double next_gaussian() {
    if (have_gauss_) {
      have_gauss_ = false;
      return gauss_spare_;
    }
    // 1 - u lies in (0, 1], keeping the log finite.
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    gauss_spare_ = r * std::sin(a);
    have_gauss_ = true;
    return r * std::cos(a);
  }

 private:
  static constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ULL;
  static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  // SplitMix64 finalizer; decorrelates trivially related seeds.
  static std::uint64_t mix64(std::uint64_t z) {
    z += kWeyl;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t ctr_hi_ = 0;
  std::uint64_t ctr_lo_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
  double gauss_spare_ = 0.0;
  bool have_gauss_ = false;
};

}  // namespace rotlab
