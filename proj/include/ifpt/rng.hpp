#pragma once

#include <array>
#include <cstdint>

namespace ifpt {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to derive independent sub-seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives a child seed from a parent seed and a tag.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
}

/// Purpose tags that separate the random streams of one run.
enum class StreamTag : std::uint32_t {
    initial = 1,   // initial-law sampling, one draw block per particle
    increment = 2, // process increments, keyed by (particle, step)
    target = 3,    // target-distribution sampling
    test = 15,
};

/// Counter-based random stream keyed by (seed, tag, particle, step).
///
/// The output only depends on the key, never on the order in which streams
/// are created or consumed, so particle updates can run on any number of
/// threads and still reproduce bit-identical results.
class KeyedStream {
public:
    KeyedStream(std::uint64_t seed, StreamTag tag, std::uint64_t particle, std::uint64_t step);

    /// Uniform on the open interval (0,1) with 53 random bits.
    double uniform();
    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();
    std::uint64_t bits();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace ifpt
