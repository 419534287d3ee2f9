#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace switchlab::rng {

// Finalizing mix of splitmix64.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Labeled sub-stream seed. Every derived series (volume noise, intertrade
// draws, omega field, per-realization paths) gets its own stream, so
// attaching one series never perturbs the draws of another.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::string_view label,
                                    std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ fnv1a(label)) + index);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::string_view label,
                                   std::uint64_t index = 0) {
    return std::mt19937_64(stream_seed(master, label, index));
}

}  // namespace switchlab::rng
