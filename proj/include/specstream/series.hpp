#pragma once

// Power-series machinery for the block quadratic roots: the coefficients
// A_s, B_s of r1(k)^p = sum A_s k^s and r2(k)^p = sum B_s k^s, computed by
// two independent formulas (a falling-factorial form and a Catalan-
// composition form), the Stirling-weighted sums G1, G2 they induce, and the
// exact alternating sums they must reproduce.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "specstream/blocks.hpp"
#include "specstream/combinatorics.hpp"

namespace specstream {

// Validity window for the series parameters; the Catalan-series argument
// stays inside the convergence disk for k <= m.
inline void check_series_window(int m, double gamma) {
    if (m < 2 || m > 12) throw std::invalid_argument("series: need 2 <= m <= 12");
    if (!(gamma > 0) || !(gamma < double(m) * m / 5.0))
        throw std::invalid_argument("series: gamma outside (0, m^2/5) diverges");
}

struct SeriesCoefficients {
    double p = 1.0;
    int m = 2;
    double gamma = 1.0;
    int s_max = 40;
    std::vector<double> a;          // falling-factorial form
    std::vector<double> b;
    std::vector<double> a_catalan;  // Catalan-composition form
    std::vector<double> b_catalan;

    double max_dual_deviation() const {
        double worst = 0;
        for (std::size_t s = 0; s < a.size(); ++s) {
            double da = std::abs(a[s] - a_catalan[s]);
            double db = std::abs(b[s] - b_catalan[s]);
            double ra = da / std::max({std::abs(a[s]), std::abs(a_catalan[s]), 1e-300});
            double rb = db / std::max({std::abs(b[s]), std::abs(b_catalan[s]), 1e-300});
            worst = std::max({worst, ra, rb});
        }
        return worst;
    }

    double partial_sum_r1(double k) const {
        long double acc = 0, kp = 1;
        for (double c : a) {
            acc += static_cast<long double>(c) * kp;
            kp *= k;
        }
        return static_cast<double>(acc);
    }

    double partial_sum_r2(double k) const {
        long double acc = 0, kp = 1;
        for (double c : b) {
            acc += static_cast<long double>(c) * kp;
            kp *= k;
        }
        return static_cast<double>(acc);
    }
};

namespace detail {

// F_{p,s,i} = prod_{j=0}^{s-i-1} (p - j) * prod_{j=1}^{i} (p - 2s + j)
inline long double falling_product(double p, int s, int i) {
    long double f = 1;
    for (int j = 0; j <= s - i - 1; ++j) f *= (static_cast<long double>(p) - j);
    for (int j = 1; j <= i; ++j) f *= (static_cast<long double>(p) - 2 * s + j);
    return f;
}

// Generalized binomial coefficient C(p, j) for real p.
inline long double binom_real(double p, int j) {
    long double r = 1;
    for (int i = 0; i < j; ++i) r *= (static_cast<long double>(p) - i) / (i + 1);
    return r;
}

}  // namespace detail

inline SeriesCoefficients series_coefficients(double p, int m, double gamma, int s_max = -1) {
    check_series_window(m, gamma);
    if (!(p > 0)) throw std::invalid_argument("series: p must be positive");
    if (s_max < 0) s_max = std::max(2 * m, 40);
    if (s_max < m || s_max > 60) throw std::invalid_argument("series: need m <= s_max <= 60");

    SeriesCoefficients out;
    out.p = p;
    out.m = m;
    out.gamma = gamma;
    out.s_max = s_max;
    const long double m2 = static_cast<long double>(m) * m;
    const long double g = gamma;
    const long double d = m2 - g;  // m^2 - gamma > 0 inside the window

    out.a.assign(std::size_t(s_max) + 1, 0.0);
    out.b.assign(std::size_t(s_max) + 1, 0.0);
    out.a_catalan.assign(std::size_t(s_max) + 1, 0.0);
    out.b_catalan.assign(std::size_t(s_max) + 1, 0.0);
    out.a[0] = out.a_catalan[0] = static_cast<double>(std::pow(static_cast<long double>(m), 2.0L * p));
    out.b[0] = out.b_catalan[0] = static_cast<double>(std::pow(g, static_cast<long double>(p)));

    for (int s = 1; s <= s_max; ++s) {
        long double fact_s = 1;
        for (int i = 2; i <= s; ++i) fact_s *= i;
        const long double d_pow = std::pow(d, 2.0L * s - 1);

        // Falling-factorial form.
        long double sum_a = 0, sum_b = 0;
        for (int i = 0; i <= s - 1; ++i) {
            long double cb = static_cast<long double>(static_cast<double>(binomial(s - 1, i)));
            long double f = detail::falling_product(p, s, i);
            long double sign = (i % 2 == 0) ? 1 : -1;
            sum_a += sign * cb * f * std::pow(g, static_cast<long double>(s - i - 1)) *
                     std::pow(m2, static_cast<long double>(i));
            sum_b += sign * cb * f * std::pow(g, static_cast<long double>(i)) *
                     std::pow(m2, static_cast<long double>(s - i - 1));
        }
        long double sign_a = (s % 2 == 1) ? 1 : -1;  // (-1)^{s-1}
        long double sign_b = (s % 2 == 0) ? 1 : -1;  // (-1)^s
        out.a[std::size_t(s)] = static_cast<double>(
            sign_a * std::pow(g, static_cast<long double>(s)) *
            std::pow(static_cast<long double>(m), 2.0L * p - s) / (fact_s * d_pow) * sum_a);
        out.b[std::size_t(s)] = static_cast<double>(
            sign_b * std::pow(g, static_cast<long double>(p)) *
            std::pow(static_cast<long double>(m), static_cast<long double>(s)) / (fact_s * d_pow) *
            sum_b);

        // Catalan-composition form; the composition count is
        // (i+1)/s * C(2s-i-2, s-1). The larger root's sum alternates; the
        // smaller root's does not (its Catalan series already carries the
        // (-1)^n, which the binomial power absorbs).
        long double sum_ac = 0, sum_bc = 0;
        for (int i = 0; i <= s - 1; ++i) {
            long double comp = 1;
            {   // C(2s-i-2, s-1) via a multiplicative loop
                int top = 2 * s - i - 2, bot = s - 1;
                if (bot > top) {
                    comp = 0;
                } else {
                    for (int j = 1; j <= bot; ++j)
                        comp = comp * (top - bot + j) / j;
                }
            }
            comp *= static_cast<long double>(i + 1) / s;
            long double cb = detail::binom_real(p, i + 1);
            long double sign = (i % 2 == 0) ? 1 : -1;
            sum_ac += sign * cb * comp * std::pow(static_cast<long double>(m), static_cast<long double>(s) - 2 * (i + 1)) *
                      std::pow(d, static_cast<long double>(i));
            sum_bc += cb * comp * std::pow(g, static_cast<long double>(s - i - 1)) *
                      std::pow(d, static_cast<long double>(i));
        }
        long double sign_ac = (s % 2 == 0) ? -1 : 1;  // (-1)^{s+1}
        out.a_catalan[std::size_t(s)] = static_cast<double>(
            sign_ac * std::pow(g, static_cast<long double>(s)) *
            std::pow(static_cast<long double>(m), 2.0L * p) / std::pow(d, 2.0L * s - 1) * sum_ac);
        out.b_catalan[std::size_t(s)] = static_cast<double>(
            sign_b * std::pow(g, static_cast<long double>(p)) *
            std::pow(static_cast<long double>(m), static_cast<long double>(s)) /
            std::pow(d, 2.0L * s - 1) * sum_bc);
    }
    return out;
}

// G_i = sum_k (-1)^k C(m,k) r_i(k)^p, from the closed-form roots.
struct GSums {
    double g1 = 0;
    double g2 = 0;
    double sum() const { return g1 + g2; }
};

inline GSums g_sums_direct(double p, int m, double gamma) {
    if (m < 2 || m > 12) throw std::invalid_argument("g_sums: need 2 <= m <= 12");
    if (!(p > 0)) throw std::invalid_argument("g_sums: p must be positive");
    if (!(gamma > 0) || !(gamma < double(m) * m))
        throw std::invalid_argument("g_sums: need 0 < gamma < m^2");
    long double g1 = 0, g2 = 0;
    for (int k = 0; k <= m; ++k) {
        auto [r1, r2] = asymmetric_roots_l(m, k, gamma);
        long double c = static_cast<long double>(static_cast<double>(binomial(m, k)));
        long double sign = (k % 2 == 0) ? 1 : -1;
        g1 += sign * c * std::pow(r1, static_cast<long double>(p));
        g2 += sign * c * (r2 <= 0 ? 0.0L : std::pow(r2, static_cast<long double>(p)));
    }
    return {static_cast<double>(g1), static_cast<double>(g2)};
}

// Truncated Stirling-weighted sums G_i = sum_{s >= m} S(s,m) m! {A_s, B_s}.
inline GSums series_g_sums(const SeriesCoefficients& c) {
    long double mfact = 1;
    for (int i = 2; i <= c.m; ++i) mfact *= i;
    long double g1 = 0, g2 = 0;
    for (int s = c.m; s <= c.s_max; ++s) {
        long double w = static_cast<long double>(stirling2_double(s, c.m)) * mfact;
        g1 += w * static_cast<long double>(c.a[std::size_t(s)]);
        g2 += w * static_cast<long double>(c.b[std::size_t(s)]);
    }
    return {static_cast<double>(g1), static_cast<double>(g2)};
}

// Alternating entropy sums at gamma = 1:
// G_i = sum_k (-1)^k C(m,k) r_i(k) ln r_i(k).
struct EntropyGap {
    double g1 = 0;
    double g2 = 0;
    bool verdict_claimed = false;  // only claimed for m >= 4
    bool nonzero = false;
    double sum() const { return g1 + g2; }
};

inline EntropyGap entropy_gap(int m, double tolerance = 1e-12) {
    if (m < 2 || m > 12 || m % 2 != 0)
        throw std::invalid_argument("entropy_gap: need even m with 2 <= m <= 12");
    long double g1 = 0, g2 = 0;
    for (int k = 0; k <= m; ++k) {
        auto [r1, r2] = asymmetric_roots_l(m, k, 1.0L);
        long double c = static_cast<long double>(static_cast<double>(binomial(m, k)));
        long double sign = (k % 2 == 0) ? 1 : -1;
        g1 += sign * c * r1 * std::log(r1);
        if (r2 > 0) g2 += sign * c * r2 * std::log(r2);
    }
    EntropyGap out;
    out.g1 = static_cast<double>(g1);
    out.g2 = static_cast<double>(g2);
    out.verdict_claimed = m >= 4;
    out.nonzero = std::abs(out.sum()) > tolerance;
    return out;
}

}  // namespace specstream
