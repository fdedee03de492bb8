#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace antgen {

/// 64-bit FNV-1a over a byte range. Also used for dataset checksums.
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash = kFnvOffset) noexcept
{
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= kFnvPrime;
    }
    return hash;
}

/// SplitMix64 finaliser (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for an independent stream identified by (seed, purpose tag, index).
/// Streams for different agents never overlap in their derivation, so adding
/// agents leaves every other agent's draws untouched.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) noexcept
{
    return splitmix64(splitmix64(splitmix64(seed) ^ fnv1a64(tag)) ^ splitmix64(index + 1));
}

/// Box-Muller transform, cosine branch: sqrt(-2 ln u1) * cos(2 pi u2).
double box_muller(double u1, double u2) noexcept;

/// Seedable generator: std::mt19937_64 with open-interval uniforms and
/// Box-Muller normals. Each normal consumes exactly two uniforms.
class SeededRng
{
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
    SeededRng(std::uint64_t seed, std::string_view tag, std::uint64_t index)
        : engine_(stream_seed(seed, tag, index))
    {
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1); 53-bit resolution.
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    double standard_normal()
    {
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        return box_muller(u1, u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * standard_normal(); }

private:
    std::mt19937_64 engine_;
};

} // namespace antgen
