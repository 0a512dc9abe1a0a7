#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace currl {

// Deterministic random stream. All randomness in the library flows through
// explicitly passed Rng instances; there is no global generator. Draws are
// implemented on top of the engine's raw 64-bit output so that a given seed
// produces the same stream on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Unbiased uniform integer in [0, n) via Lemire's method. Requires n >= 1.
    int uniform_int(int n) {
        const auto bound = static_cast<std::uint64_t>(n);
        auto wide = static_cast<unsigned __int128>(next_u64()) * bound;
        auto low = static_cast<std::uint64_t>(wide);
        if (low < bound) {
            const std::uint64_t threshold = std::uint64_t(0) - bound;
            const std::uint64_t reject_below = threshold % bound;
            while (low < reject_below) {
                wide = static_cast<unsigned __int128>(next_u64()) * bound;
                low = static_cast<std::uint64_t>(wide);
            }
        }
        return static_cast<int>(wide >> 64);
    }

    bool chance(double p) { return uniform01() < p; }

    // Child stream keyed by (this stream's seed, words...). Children depend
    // only on the seed and the key words, never on how much of the parent
    // stream has been consumed.
    Rng child(std::initializer_list<std::uint64_t> words) const {
        std::uint64_t h = seed_;
        for (std::uint64_t w : words) {
            h = mix(h ^ (w + 0x9e3779b97f4a7c15ull));
        }
        return Rng(mix(h));
    }

    // SplitMix64 finalizer.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace currl
