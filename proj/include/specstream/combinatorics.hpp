#pragma once

// Exact combinatorial quantities: binomials, Stirling numbers of the second
// kind, Catalan numbers, alternating binomial moments, and the parity-
// restricted binomial distributions used as block-count laws.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace specstream {

using Int128 = __int128;

inline std::string to_string_i128(Int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    std::string digits;
    while (u) {
        digits.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) digits.push_back('-');
    return std::string(digits.rbegin(), digits.rend());
}

inline Int128 checked_add(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}

inline Int128 checked_mul(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}

// C(n, k), exact; n <= 64 stays within range for all k.
inline Int128 binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (n > 64) throw std::invalid_argument("binomial: n must be <= 64");
    k = std::min(k, n - k);
    Int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = checked_mul(r, n - k + i);
        r /= i;
    }
    return r;
}

// Stirling number of the second kind S(s, m), exact with overflow rejection.
// S(s, m) = 0 whenever m > s.
inline Int128 stirling2(int s, int m) {
    if (s < 0 || m < 0 || s > 64 || m > 64)
        throw std::invalid_argument("stirling2: need 0 <= s, m <= 64");
    if (m > s) return 0;
    if (s == 0) return 1;
    if (m == 0) return 0;
    std::vector<Int128> row(std::size_t(m) + 1, 0);
    row[0] = 1;  // S(0,0)
    for (int i = 1; i <= s; ++i) {
        for (int j = std::min(i, m); j >= 1; --j) {
            Int128 carry = (j <= i - 1) ? row[std::size_t(j)] : 0;
            row[std::size_t(j)] = checked_add(checked_mul(Int128(j), carry), row[std::size_t(j) - 1]);
        }
        row[0] = 0;
    }
    return row[std::size_t(m)];
}

// S(s, m) in double via the same all-positive recurrence; no cancellation,
// so the relative error stays near machine precision even when the exact
// value overflows 128 bits.
inline double stirling2_double(int s, int m) {
    if (s < 0 || m < 0) throw std::invalid_argument("stirling2_double: negative argument");
    if (m > s) return 0.0;
    if (s == 0) return 1.0;
    if (m == 0) return 0.0;
    std::vector<double> row(std::size_t(m) + 1, 0.0);
    row[0] = 1.0;
    for (int i = 1; i <= s; ++i) {
        for (int j = std::min(i, m); j >= 1; --j) {
            double carry = (j <= i - 1) ? row[std::size_t(j)] : 0.0;
            row[std::size_t(j)] = double(j) * carry + row[std::size_t(j) - 1];
        }
        row[0] = 0.0;
    }
    return row[std::size_t(m)];
}

inline std::int64_t catalan(int n) {
    if (n < 0 || n > 32) throw std::invalid_argument("catalan: need 0 <= n <= 32");
    // C_{n+1} = C_n * 2(2n+1)/(n+2); the division is exact.
    std::int64_t c = 1;
    for (int i = 0; i < n; ++i) {
        Int128 next = checked_mul(Int128(c), 2 * (2 * i + 1));
        next /= (i + 2);
        c = static_cast<std::int64_t>(next);
    }
    return c;
}

// sum_k C(m,k) k^s (-1)^k, by direct summation. Equals S(s,m) (-1)^m m!.
inline Int128 alternating_moment(int m, int s) {
    if (m < 0 || s < 0 || m > 20 || s > 20)
        throw std::invalid_argument("alternating_moment: need 0 <= m, s <= 20");
    Int128 acc = 0;
    for (int k = 0; k <= m; ++k) {
        Int128 pow = 1;
        for (int j = 0; j < s; ++j) pow = checked_mul(pow, k);
        Int128 term = checked_mul(binomial(m, k), pow);
        acc = checked_add(acc, (k % 2 == 0) ? term : -term);
    }
    return acc;
}

inline Int128 factorial_i128(int n) {
    Int128 r = 1;
    for (int i = 2; i <= n; ++i) r = checked_mul(r, i);
    return r;
}

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return double(num) / double(den); }
};

enum class Parity { Even, Odd };

// The law of the per-block tentacle count: C(m,k)/2^{m-1} restricted to one
// parity class of k. Weights are exact dyadic rationals and sum to 1.
struct ParityDistribution {
    int m = 2;
    Parity parity = Parity::Even;
    std::vector<std::pair<int, Rational>> weights;  // (k, p_m(k)), k ascending

    static ParityDistribution make(int m, Parity parity) {
        if (m < 1 || m > 62) throw std::invalid_argument("parity distribution: need 1 <= m <= 62");
        ParityDistribution d;
        d.m = m;
        d.parity = parity;
        const std::int64_t den = std::int64_t(1) << (m - 1);
        int start = parity == Parity::Even ? 0 : 1;
        for (int k = start; k <= m; k += 2) {
            d.weights.push_back({k, Rational{static_cast<std::int64_t>(binomial(m, k)), den}});
        }
        return d;
    }

    // Exact: numerators over the parity class sum to 2^{m-1}.
    bool sums_to_one() const {
        Int128 total = 0;
        for (const auto& [k, w] : weights) total = checked_add(total, w.num);
        return total == weights.front().second.den;
    }
};

}  // namespace specstream
