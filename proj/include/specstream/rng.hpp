#pragma once

// Deterministic randomness utilities. All randomness in the library flows
// from a single 64-bit seed through derive_seed(), so identical seeds give
// identical results on every platform.

#include <cstdint>
#include <random>
#include <vector>

namespace specstream {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Hierarchical seed split: child = H(parent, component, index...).
// Components get small integer ids; nesting is by repeated derivation.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t component,
                                 std::uint64_t index = 0) {
    std::uint64_t s = parent ^ (0xa0761d6478bd642fULL + component * 0xe7037ed1a0b428dbULL);
    std::uint64_t a = splitmix64(s);
    s ^= index * 0x8ebc6af09c88c6e3ULL + 0x589965cc75374cc3ULL;
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x2545f4914f6cdd1dULL);
}

// Maps a 64-bit word to (0, 1); never returns an exact 0 or 1.
inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Thin deterministic generator. mt19937_64 is fully specified by the
// standard; the derived draws below avoid std::*_distribution, whose
// output is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t u64() { return engine_(); }

    double unit() { return unit_double(u64()); }

    // Uniform integer in [0, n), n > 0. Rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = u64();
        } while (x >= limit);
        return x % n;
    }

    std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace specstream
