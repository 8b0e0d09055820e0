#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rooneysim {

// SplitMix64 finalizer; also the mixing step for substream derivation.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based substream key: the result depends only on (parent, index),
// never on how many other streams were derived before it.
inline constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(mix64(parent + 0x9E3779B97F4A7C15ULL) ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

// Fixed stream tags keep derivations for different purposes disjoint.
enum class Stream : std::uint64_t {
    replicate = 0x5245504CULL,
    round = 0x524F554EULL,
    session = 0x53455353ULL,
    assignment = 0x41535347ULL,
};

inline constexpr std::uint64_t derive_seed(std::uint64_t parent, Stream tag, std::uint64_t index) noexcept {
    return derive_seed(derive_seed(parent, static_cast<std::uint64_t>(tag)), index);
}

// xoshiro256** seeded through SplitMix64. Satisfies UniformRandomBitGenerator
// so it can drive <algorithm> utilities, but all distribution sampling in the
// library goes through the helpers below for cross-platform reproducibility.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9E3779B97F4A7C15ULL;
            word = mix64(x);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            state_[0] = 1;
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1); never returns 0, so safe under log().
    double uniform_open() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t draw;
        do {
            draw = (*this)();
        } while (draw >= limit);
        return draw % bound;
    }

    // Standard normal via the Marsaglia polar method; the second variate is
    // discarded so the generator carries no hidden cache.
    double normal() noexcept;

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace rooneysim
