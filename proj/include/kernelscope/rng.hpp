#pragma once

#include <cstdint>

#include "kernelscope/tensor.hpp"

namespace kernelscope {

// splitmix64 (Steele/Lea/Flood finalizer). Chosen so validation fixtures are
// reproducible from the seed alone on any platform: state advances by the
// golden-ratio increment, output is the mixed pre-increment state.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0,1) from the top 53 bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform float in [-1,1).
    float next_pm1() { return static_cast<float>(2.0 * next_unit() - 1.0); }
};

// Validation inputs are drawn from one stream in a fixed order: x fully,
// then k, then gy, each filled in flat (row-major) index order.
inline void fill_pm1(SplitMix64& rng, Tensor3& t) {
    for (auto& v : t.data) v = rng.next_pm1();
}

inline void fill_pm1(SplitMix64& rng, Kernel2& k) {
    for (auto& v : k.data) v = rng.next_pm1();
}

} // namespace kernelscope
