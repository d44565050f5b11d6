#pragma once

// Boolean Hidden Hypermatching instances under the zero/one promise, the
// parity-preserving reduction from the weighted variant, and emission of the
// matching hard-instance matrix as a turnstile stream.
//
// The promise distribution pairs the n/t matching edges into groups of two;
// within a group the tentacle counts are (q, t - q) with q drawn from the
// parity-restricted binomial law, independently across groups. Every block
// parity equals the promise bit and the total weight is exactly n/2.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "specstream/combinatorics.hpp"
#include "specstream/rng.hpp"
#include "specstream/stream_file.hpp"

namespace specstream {

enum class PromiseCase { AllZero, AllOne };

inline const char* promise_name(PromiseCase c) {
    return c == PromiseCase::AllZero ? "even" : "odd";
}

struct BhhInstance {
    int t = 2;
    std::size_t n = 8;                           // 4rt coordinates
    std::vector<std::uint8_t> x;                 // weight n/2
    std::vector<std::vector<std::uint32_t>> matching;  // n/t edges of size t
    PromiseCase promise = PromiseCase::AllZero;

    int edge_parity(std::size_t e) const {
        int p = 0;
        for (std::uint32_t c : matching[e]) p ^= x[c];
        return p;
    }

    int edge_weight(std::size_t e) const {
        int q = 0;
        for (std::uint32_t c : matching[e]) q += x[c];
        return q;
    }

    std::size_t weight() const {
        return std::accumulate(x.begin(), x.end(), std::size_t{0});
    }
};

namespace detail {

// Draw k from the parity-restricted binomial law C(t,k)/2^{t-1}.
inline int draw_parity_count(const ParityDistribution& dist, Rng& rng) {
    const std::int64_t den = dist.weights.front().second.den;
    std::int64_t r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(den)));
    for (const auto& [k, w] : dist.weights) {
        if (r < w.num) return k;
        r -= w.num;
    }
    return dist.weights.back().first;
}

// Uniform k-subset of [t] as a bitmask vector.
inline std::vector<std::uint8_t> random_pattern(int t, int k, Rng& rng) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(t), 0);
    std::vector<std::uint32_t> idx(static_cast<std::size_t>(t));
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    for (int i = 0; i < k; ++i) bits[idx[std::size_t(i)]] = 1;
    return bits;
}

}  // namespace detail

inline BhhInstance sample_instance(int t, std::size_t n, PromiseCase promise,
                                   std::uint64_t seed) {
    if (t < 2 || t % 2 != 0) throw std::invalid_argument("bhh: t must be a positive even integer");
    if (n == 0 || n % (4 * std::size_t(t)) != 0)
        throw std::invalid_argument("bhh: n must be a positive multiple of 4t");

    BhhInstance inst;
    inst.t = t;
    inst.n = n;
    inst.promise = promise;

    Rng match_rng(derive_seed(seed, 30));
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    match_rng.shuffle(perm);
    const std::size_t edges = n / std::size_t(t);
    inst.matching.resize(edges);
    for (std::size_t e = 0; e < edges; ++e)
        inst.matching[e].assign(perm.begin() + std::ptrdiff_t(e) * t,
                                perm.begin() + std::ptrdiff_t(e + 1) * t);

    auto dist = ParityDistribution::make(
        t, promise == PromiseCase::AllZero ? Parity::Even : Parity::Odd);
    Rng x_rng(derive_seed(seed, 31));
    inst.x.assign(n, 0);
    for (std::size_t g = 0; g < edges / 2; ++g) {
        int q = detail::draw_parity_count(dist, x_rng);
        auto bits = detail::random_pattern(t, q, x_rng);
        const auto& first = inst.matching[2 * g];
        const auto& second = inst.matching[2 * g + 1];
        for (int i = 0; i < t; ++i) {
            inst.x[first[std::size_t(i)]] = bits[std::size_t(i)];
            inst.x[second[std::size_t(i)]] = static_cast<std::uint8_t>(1 - bits[std::size_t(i)]);
        }
    }
    return inst;
}

// The reduction from the weighted problem: x' = x || ~x and two hyperedges
// per original edge, with one bit flipped on each copy when w_l = 1. Then
// M'x' is the all-zero vector exactly when Mx xor w is.
inline std::pair<std::vector<std::uint8_t>, std::vector<std::vector<std::uint32_t>>>
reduce_bhh_to_bhh0(const std::vector<std::uint8_t>& x,
                   const std::vector<std::vector<std::uint32_t>>& matching,
                   const std::vector<std::uint8_t>& w) {
    const std::size_t n = x.size();
    if (matching.empty()) throw std::invalid_argument("reduction: empty matching");
    const std::size_t t = matching.front().size();
    if (t % 2 != 0) throw std::invalid_argument("reduction: t must be even");
    if (w.size() != matching.size()) throw std::invalid_argument("reduction: |w| must equal n/t");

    std::vector<std::uint8_t> x2(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        x2[i] = x[i];
        x2[n + i] = static_cast<std::uint8_t>(1 - x[i]);
    }
    // index + n addresses the negated copy of a coordinate
    std::vector<std::vector<std::uint32_t>> m2;
    m2.reserve(2 * matching.size());
    for (std::size_t l = 0; l < matching.size(); ++l) {
        const auto& edge = matching[l];
        if (edge.size() != t) throw std::invalid_argument("reduction: ragged matching");
        std::vector<std::uint32_t> a = edge;
        std::vector<std::uint32_t> b(edge.size());
        for (std::size_t i = 0; i < t; ++i) b[i] = edge[i] + static_cast<std::uint32_t>(n);
        if (w[l]) {
            std::swap(a[0], b[0]);  // flip one bit on each copy
        }
        m2.push_back(std::move(a));
        m2.push_back(std::move(b));
    }
    return {std::move(x2), std::move(m2)};
}

struct HardStream {
    std::size_t N = 0;  // matrix dimension, 2m per block
    std::vector<MatrixUpdate> alice;  // tentacle entries, value sqrt(gamma)
    std::vector<MatrixUpdate> bob;    // clique entries
    std::vector<std::pair<std::uint32_t, int>> descriptors;  // (block, q)

    std::vector<MatrixUpdate> concatenated() const {
        std::vector<MatrixUpdate> all = alice;
        all.insert(all.end(), bob.begin(), bob.end());
        return all;
    }
};

// Lays the instance out as a block-diagonal matrix: block j occupies indices
// [2mj, 2m(j+1)), clique in the top-left m x m corner, tentacle r on row
// m + r against clique vertex r. Stream order within each part is shuffled
// by order_seed. gamma must have an integer square root so records stay
// integral.
inline HardStream emit_stream(const BhhInstance& inst, int m, double gamma,
                              std::uint64_t order_seed) {
    if (m < inst.t) throw std::invalid_argument("emit_stream: need m >= t");
    std::int64_t root = std::llround(std::sqrt(gamma));
    if (root < 1 || static_cast<double>(root) * static_cast<double>(root) != gamma)
        throw std::invalid_argument("emit_stream: gamma must be a perfect square for integer streams");

    HardStream hs;
    const std::size_t blocks = inst.matching.size();
    const std::size_t bdim = 2 * std::size_t(m);
    hs.N = blocks * bdim;
    for (std::size_t j = 0; j < blocks; ++j) {
        const std::uint32_t base = static_cast<std::uint32_t>(j * bdim);
        int q = 0;
        for (std::size_t r = 0; r < std::size_t(inst.t); ++r) {
            if (!inst.x[inst.matching[j][r]]) continue;
            ++q;
            hs.alice.push_back({base + std::uint32_t(m + r), base + std::uint32_t(r), root});
        }
        for (std::uint32_t a = 0; a < std::uint32_t(m); ++a)
            for (std::uint32_t b = 0; b < std::uint32_t(m); ++b)
                hs.bob.push_back({base + a, base + b, 1});
        hs.descriptors.push_back({static_cast<std::uint32_t>(j), q});
    }
    Rng alice_rng(derive_seed(order_seed, 32));
    Rng bob_rng(derive_seed(order_seed, 33));
    alice_rng.shuffle(hs.alice);
    bob_rng.shuffle(hs.bob);
    return hs;
}

inline StreamFile to_stream_file(const HardStream& hs, const BhhInstance& inst, int m,
                                 double gamma, std::uint64_t seed) {
    StreamFile f;
    int sum_q = 0;
    for (const auto& [j, q] : hs.descriptors) sum_q += q;
    f.header = {
        {"n", std::to_string(hs.N)},
        {"t", std::to_string(inst.t)},
        {"bhh_n", std::to_string(inst.n)},
        {"m", std::to_string(m)},
        {"gamma", std::to_string(gamma)},
        {"case", promise_name(inst.promise)},
        {"seed", std::to_string(seed)},
        {"sum_q", std::to_string(sum_q)},
    };
    f.updates = hs.concatenated();
    f.n = hs.N;
    return f;
}

}  // namespace specstream
