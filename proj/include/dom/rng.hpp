#pragma once

#include <cmath>
#include <cstdint>

namespace dom {

// splitmix64. Used both as a standalone generator and to derive stream seeds;
// the bit patterns are platform-independent, which is what keeps episode files
// byte-stable across toolchains (std::uniform_real_distribution is not).
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t value) {
    uint64_t s = seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(uint64_t seed = 0) : state_(seed) {
        // burn-in so nearby seeds decorrelate
        splitmix64(state_);
    }

    uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    uint64_t uniform_int(uint64_t lo, uint64_t hi) {  // inclusive bounds
        return lo + next_u64() % (hi - lo + 1);
    }

    // Box-Muller; one value per call, deterministic draw order.
    double normal() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    uint64_t state() const { return state_; }
    void set_state(uint64_t s) { state_ = s; }

private:
    uint64_t state_;
};

// FNV-1a, used for config and episode-file digests.
inline uint64_t fnv1a(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace dom
