// Seedable, splittable random number generation.
//
// xoshiro256++ streams seeded through splitmix64. Child seeds derive as
// derive_seed(master, index), so adding a consumer never perturbs the
// streams of existing ones. All distributions are implemented here (not
// taken from <random>) so that sequences are identical across standard
// library implementations.

#ifndef SUBNYQ_RNG_HPP
#define SUBNYQ_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

#include "subnyq/angles.hpp"

namespace subnyq {

// splitmix64 finalizer; also serves as the seed-derivation hash.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 0x517cc1b727220a95ULL));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i, std::uint64_t j) {
    return derive_seed(derive_seed(master, i), j);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = mix64(s += 0x9e3779b97f4a7c15ULL);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Top k bits of one draw, uniform over [0, 2^k).
    std::uint64_t bits(int k) { return next_u64() >> (64 - k); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * kPi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace subnyq

#endif
