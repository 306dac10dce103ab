#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace setler {

// SplitMix64: tiny, fully specified generator so that Monte Carlo streams
// are reproducible independent of the standard library in use.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in (0, 1]
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53;
    }

    // standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Deterministic per-batch stream derived from a base seed.
inline SplitMix64 batch_stream(std::uint64_t seed, std::uint64_t batch) {
    SplitMix64 mix(seed ^ (0xA0761D6478BD642FULL * (batch + 1)));
    mix.next();
    return mix;
}

}  // namespace setler
