#pragma once

#include <cstdint>

namespace slrt::rng {

// 64-bit finalizer from splitmix64 (Steele, Lea, Flood). Bijective.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Stream tags for per-replicate seed derivation.
enum : std::uint64_t {
    kStreamData = 1,   // observation sampling
    kStreamSplit = 2,  // fold-assignment shuffle
    kStreamEm = 3,     // EM initialisation
};

// Counter-based seed derivation:
//   derive_seed(master, i, tag) = mix64(mix64(master ^ mix64(tag)) + kGoldenGamma * (i + 1))
// Injective in i for fixed (master, tag), so replicate streams never collide
// and results are independent of scheduling. This scheme is part of the
// output-stability contract; changing it changes every simulation result.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::uint64_t stream_tag) noexcept {
    return mix64(mix64(master ^ mix64(stream_tag)) + kGoldenGamma * (index + 1));
}

// splitmix64 generator. Small, fast, passes BigCrush, and unlike the
// standard-library engines its output is identical on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1); never returns 0, safe under log().
    double next_double_open() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Unbiased integer in [0, bound) via rejection of the wrap-around excess.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
};

// Standard normal deviates via Box-Muller; the pair's second value is cached.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) noexcept : rng_(seed) {}

    double next();

    SplitMix64& engine() noexcept { return rng_; }

private:
    SplitMix64 rng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace slrt::rng
