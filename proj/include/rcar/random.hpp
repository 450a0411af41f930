#ifndef RCAR_RANDOM_HPP
#define RCAR_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace rcar {

/// Tags that keep the streams of one experiment disjoint.
enum class StreamPurpose : std::uint64_t {
    process = 0x70726f63,
    lepage = 0x6c657067,
    cms = 0x636d7373,
    risk = 0x7269736b,
    auxiliary = 0x61757878,
};

constexpr std::string_view to_string(StreamPurpose purpose) noexcept
{
    switch (purpose) {
    case StreamPurpose::process: return "process";
    case StreamPurpose::lepage: return "lepage";
    case StreamPurpose::cms: return "cms";
    case StreamPurpose::risk: return "risk";
    case StreamPurpose::auxiliary: return "auxiliary";
    }
    return "unknown";
}

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the stream owned by job `index` of the given purpose under `root`.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index, StreamPurpose purpose) noexcept
{
    return mix64(mix64(mix64(root) ^ static_cast<std::uint64_t>(purpose)) ^ index);
}

/// A seeded source of the primitive draws used throughout the library.
///
/// Uniforms are built from the top 53 bits of one engine word and lie in the
/// open interval (0, 1), so `exponential()` is always finite. Every primitive
/// consumes a fixed number of engine words except `normal()`, which follows the
/// standard library's polar method.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    static Stream derived(std::uint64_t root, std::uint64_t index, StreamPurpose purpose)
    {
        return Stream(derive_seed(root, index, purpose));
    }

    std::uint64_t bits() { return engine_(); }

    double uniform() { return (static_cast<double>(bits() >> 11) + 0.5) * 0x1p-53; }

    /// Unit-rate exponential as -ln(U).
    double exponential() { return -std::log(uniform()); }

    double normal() { return normal_(engine_); }

    /// +1 or -1 with equal probability, from the top bit of one word.
    double sign() { return (bits() >> 63) != 0 ? 1.0 : -1.0; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

} // namespace rcar

#endif // RCAR_RANDOM_HPP
