#pragma once

// Gauss hypergeometric 2F1 in the two shapes the identity checks need:
// terminating polynomials (upper parameter a nonpositive integer) and a
// plain truncated series for the convergent |x| < 1 case.

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "specstream/combinatorics.hpp"

namespace specstream {

namespace detail {

inline bool near_integer(double v, long long& out) {
    double r = std::nearbyint(v);
    if (std::abs(v - r) < 1e-12 && std::abs(r) < 9e15) {
        out = static_cast<long long>(r);
        return true;
    }
    return false;
}

inline Int128 gcd_i128(Int128 a, Int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        Int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace detail

// Terminating 2F1(a, b; c; x) with a a nonpositive integer: the finite sum
// sum_{n=0}^{-a} (a)_n (b)_n / ((c)_n n!) x^n. When a, b, c, x are all
// integers the sum is evaluated in exact rational arithmetic, so identities
// that vanish do return exactly 0. c must not be a nonpositive integer
// reachable before the series terminates.
inline double hyp2f1_terminating(double a, double b, double c, double x) {
    long long ai;
    if (!detail::near_integer(a, ai) || ai > 0)
        throw std::invalid_argument("hyp2f1_terminating: a must be a nonpositive integer");
    const long long terms = -ai;  // summation runs n = 0..terms

    long long ci;
    if (detail::near_integer(c, ci) && ci <= 0 && -ci < terms)
        throw std::invalid_argument("hyp2f1_terminating: c hits a pole before termination");

    long long bi, xi;
    bool exact = detail::near_integer(b, bi) && detail::near_integer(c, ci) &&
                 detail::near_integer(x, xi);
    if (exact) {
        // term_{n+1} = term_n * (a+n)(b+n)x / ((c+n)(n+1)), kept as a fraction
        Int128 num = 1, den = 1;       // current term
        Int128 snum = 1, sden = 1;     // running sum
        for (long long n = 0; n < terms; ++n) {
            num = checked_mul(num, Int128(ai + n));
            num = checked_mul(num, Int128(bi + n));
            num = checked_mul(num, Int128(xi));
            den = checked_mul(den, Int128(ci + n));
            den = checked_mul(den, Int128(n + 1));
            if (num == 0) break;
            Int128 g = detail::gcd_i128(num, den);
            if (g > 1) { num /= g; den /= g; }
            // sum += num/den
            Int128 new_num = checked_add(checked_mul(snum, den), checked_mul(num, sden));
            Int128 new_den = checked_mul(sden, den);
            g = detail::gcd_i128(new_num, new_den);
            if (g > 1) { new_num /= g; new_den /= g; }
            snum = new_num;
            sden = new_den;
        }
        if (sden < 0) { sden = -sden; snum = -snum; }
        if (snum == 0) return 0.0;
        return static_cast<double>(static_cast<long double>(snum) / static_cast<long double>(sden));
    }

    long double term = 1.0L, sum = 1.0L;
    for (long long n = 0; n < terms; ++n) {
        long double cn = static_cast<long double>(c) + n;
        if (cn == 0.0L) throw std::invalid_argument("hyp2f1_terminating: zero denominator");
        term *= (static_cast<long double>(a) + n) * (static_cast<long double>(b) + n) /
                (cn * (n + 1)) * static_cast<long double>(x);
        sum += term;
    }
    return static_cast<double>(sum);
}

// Truncated series for convergent 2F1, |x| < 1 (also fine for terminating
// upper parameters). Used as the independent route in transformation checks.
inline double hyp2f1_series(double a, double b, double c, double x, double tol = 1e-16,
                            int max_terms = 200000) {
    if (std::abs(x) >= 1.0) throw std::invalid_argument("hyp2f1_series: need |x| < 1");
    long double term = 1.0L, sum = 1.0L;
    for (int n = 0; n < max_terms; ++n) {
        long double cn = static_cast<long double>(c) + n;
        if (cn == 0.0L) throw std::invalid_argument("hyp2f1_series: lower parameter pole");
        term *= (static_cast<long double>(a) + n) * (static_cast<long double>(b) + n) /
                (cn * (n + 1)) * static_cast<long double>(x);
        sum += term;
        if (term == 0.0L) break;
        if (std::abs(static_cast<double>(term)) <
            tol * std::max(1.0, std::abs(static_cast<double>(sum))) && n > 4)
            break;
    }
    return static_cast<double>(sum);
}

}  // namespace specstream
