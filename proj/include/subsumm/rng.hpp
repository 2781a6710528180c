#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace subsumm {

// 64-bit FNV-1a. Shared by the feature hasher and seed derivation so the
// whole pipeline has exactly one hash function to version.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a64(std::string_view s, uint64_t seed = 0xcbf29ce484222325ULL) {
    return fnv1a64(s.data(), s.size(), seed);
}

// splitmix64. Chosen over std::mt19937 + distributions because the standard
// distributions are implementation-defined; checkpoints and candidate stores
// must be byte-identical across toolchains.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [0, n); n > 0
    size_t next_below(size_t n) {
        return static_cast<size_t>(next_u64() % n);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = next_below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_;
};

// Per-entity / per-epoch seeds derived from the master seed and a tag,
// e.g. derive_seed(master, "stage1/epoch3/entity42").
inline uint64_t derive_seed(uint64_t master, std::string_view tag) {
    return master ^ fnv1a64(tag);
}

}  // namespace subsumm
