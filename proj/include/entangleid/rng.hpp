#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace entangleid {

// Deterministic random stream: the same (seed, stream_id) pair always yields
// the same sample sequence, and distinct stream_ids derived from one seed are
// independent for simulation purposes.  Gaussians come from Box-Muller on the
// engine's uniforms rather than std::normal_distribution, whose algorithm is
// implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Same seed, different stream: used to give every simulation trial its own
  // reproducible substream regardless of how much randomness earlier trials
  // consumed.
  RngStream substream(std::uint64_t id) const { return RngStream(seed_, id); }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Standard complex Gaussian: E|z|^2 = 1.
  std::complex<double> complex_gaussian() {
    const double inv_sqrt2 = 0.7071067811865475244;
    return {gaussian() * inv_sqrt2, gaussian() * inv_sqrt2};
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace entangleid
