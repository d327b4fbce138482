#pragma once

#include <cstdint>
#include <random>

namespace msprog {

// SplitMix64 step. Used as the splittable-counter construction for deriving
// independent per-split and per-patient seeds from a master seed: the n-th
// child seed is splitmix64(master + n * GOLDEN). Children are decorrelated
// regardless of how the master seed was chosen.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    return splitmix64(master + counter * 0x9e3779b97f4a7c15ULL);
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t counter) {
    return std::mt19937_64(derive_seed(master, counter));
}

}  // namespace msprog
