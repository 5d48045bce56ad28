// seeds.hpp — counter-based seed derivation for order-independent parallel sweeps.
#pragma once

#include <cstdint>

namespace furstenberg {

// Derives the seed for sub-stream `index` from a master seed (SplitMix64
// finalizer on a counter).  Depends only on (master, index), so sweep results
// are identical for any evaluation order or worker count.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform double in [0,1) from the top 53 bits of a 64-bit word.
inline double to_unit_interval(std::uint64_t r) {
    return static_cast<double>(r >> 11) * 0x1.0p-53;
}

}  // namespace furstenberg
