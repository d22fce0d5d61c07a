#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace otm {

/// splitmix64 step; used to derive independent seed streams from a base
/// seed plus a stream index, so results do not depend on thread count.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
    return splitmix64(splitmix64(base) ^ splitmix64(stream * 0xd1342543de82ef95ULL + 1));
}

inline std::mt19937_64 make_rng(uint64_t base, uint64_t stream) {
    return std::mt19937_64(derive_seed(base, stream));
}

inline uint32_t random_bits32(std::mt19937_64& rng, int nbits) {
    return uint32_t(rng() >> (64 - nbits));
}

inline std::vector<uint8_t> random_bytes(std::mt19937_64& rng, size_t n) {
    std::vector<uint8_t> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = uint8_t(rng() >> 56);
    return out;
}

}  // namespace otm
