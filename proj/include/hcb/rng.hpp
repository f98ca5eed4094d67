#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace hcb {

/// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the chain belonging to (point, repetition) under a master seed:
/// mix64(mix64(mix64(master) ^ point) ^ repetition).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t repetition) noexcept {
    return mix64(mix64(mix64(master) ^ point) ^ repetition);
}

/// 64-bit Mersenne twister with platform-independent conversions to
/// doubles and indices.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1).
    double symmetric() noexcept { return 2.0 * uniform() - 1.0; }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) noexcept {
        const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    std::uint64_t bits() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace hcb
