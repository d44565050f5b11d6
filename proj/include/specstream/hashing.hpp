#pragma once

// k-wise independent hash families over the 61-bit Mersenne prime field.
// Degree-1 polynomials give pairwise independence (bucket hashes), degree-3
// give 4-wise independence (sign hashes).

#include <array>
#include <cstdint>

#include "specstream/rng.hpp"

namespace specstream {

constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p & kMersenne61);
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t r = lo + hi;
    if (r >= kMersenne61) r -= kMersenne61;
    return r;
}

template <int Degree>
class PolyHash {
  public:
    PolyHash() = default;

    explicit PolyHash(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (int i = 0; i <= Degree; ++i) {
            coeff_[i] = splitmix64(s) % kMersenne61;
        }
        if (coeff_[Degree] == 0) coeff_[Degree] = 1;  // keep the degree
    }

    std::uint64_t operator()(std::uint64_t x) const {
        std::uint64_t v = x % kMersenne61;
        std::uint64_t acc = coeff_[Degree];
        for (int i = Degree - 1; i >= 0; --i) {
            acc = mulmod61(acc, v);
            acc += coeff_[i];
            if (acc >= kMersenne61) acc -= kMersenne61;
        }
        return acc;
    }

  private:
    std::array<std::uint64_t, Degree + 1> coeff_{};
};

// Pairwise-independent bucket hash into [0, width).
class BucketHash {
  public:
    BucketHash() = default;
    BucketHash(std::uint64_t seed, std::uint64_t width) : poly_(seed), width_(width) {}

    std::uint64_t operator()(std::uint64_t x) const { return poly_(x) % width_; }

  private:
    PolyHash<1> poly_;
    std::uint64_t width_ = 1;
};

// 4-wise independent +/-1 hash.
class SignHash {
  public:
    SignHash() = default;
    explicit SignHash(std::uint64_t seed) : poly_(seed) {}

    int operator()(std::uint64_t x) const { return (poly_(x) & 1) ? 1 : -1; }

  private:
    PolyHash<3> poly_;
};

}  // namespace specstream
