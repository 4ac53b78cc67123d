#pragma once

#include <cstdint>
#include <random>

namespace qwr {

/// SplitMix64 mixing step.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable 64-bit mix of (seed, stream, purpose); used to derive independent
/// per-trial seeds so trials do not share sequential RNG state.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t purpose = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ purpose);
}

/// Counter-based uniform stream on [0,1); draw i is a pure function of
/// (seed, i), so callers can sample concurrently without shared state.
class CounterStream {
public:
    explicit CounterStream(std::uint64_t seed) : seed_(seed) {}

    double uniform(std::uint64_t counter) const {
        std::uint64_t bits = splitmix64(seed_ ^ splitmix64(counter));
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
};

}  // namespace qwr
