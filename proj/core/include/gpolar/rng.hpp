#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gpolar {

// splitmix64 step; also used as the stream-derivation fold.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4da2b0f5180ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mix(uint64_t seed, uint64_t v) {
    uint64_t s = seed ^ (v + 0x9e3779b97f4a7c15ULL);
    return splitmix64(s);
}

inline uint64_t mix(uint64_t seed, std::string_view tag) {
    uint64_t h = 1469598103934665603ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return mix(seed, h);
}

// Deterministic stream: every consumer derives its own Rng from
// (master seed, named purpose, indices), so results are independent of
// scheduling and of how many draws other consumers make.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // uniform on [0, n)
    int uniform_int(int n) {
        std::uniform_int_distribution<int> d(0, n - 1);
        return d(eng_);
    }

    double uniform() {
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(eng_);
    }

    // index into a cumulative-weight vector; weights need not be normalized
    template <typename Vec>
    int weighted_pick(const Vec& weights, double total) {
        double r = uniform() * total;
        double acc = 0.0;
        int last = 0;
        for (size_t k = 0; k < weights.size(); ++k) {
            if (weights[k] <= 0.0) continue;
            acc += weights[k];
            last = static_cast<int>(k);
            if (r < acc) return last;
        }
        return last;
    }

  private:
    std::mt19937_64 eng_;
};

inline Rng derive_rng(uint64_t master, std::string_view purpose, uint64_t a = 0, uint64_t b = 0) {
    uint64_t s = mix(master, purpose);
    s = mix(s, a);
    s = mix(s, b);
    return Rng(s);
}

}  // namespace gpolar
