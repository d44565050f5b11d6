#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "specstream/combinatorics.hpp"
#include "specstream/gap.hpp"
#include "specstream/hyp2f1.hpp"
#include "specstream/series.hpp"
#include "specstream/verify.hpp"

using namespace specstream;

TEST_CASE("binomial and catalan basics") {
    REQUIRE(binomial(4, 2) == 6);
    REQUIRE(binomial(64, 32) > 0);
    REQUIRE(catalan(0) == 1);
    REQUIRE(catalan(3) == 5);
    REQUIRE(catalan(10) == 16796);
    REQUIRE_THROWS_AS(catalan(33), std::invalid_argument);

    // recurrence oracle: C_n = sum C_i C_{n-1-i}
    for (int n = 1; n <= 12; ++n) {
        long long acc = 0;
        for (int i = 0; i < n; ++i) acc += catalan(i) * catalan(n - 1 - i);
        REQUIRE(catalan(n) == acc);
    }
}

TEST_CASE("stirling numbers") {
    REQUIRE(stirling2(4, 4) == 1);
    REQUIRE(stirling2(1, 2) == 0);  // m > s
    REQUIRE(stirling2(4, 2) == 7);
    REQUIRE(stirling2(5, 3) == 25);
    REQUIRE(stirling2(0, 0) == 1);
    REQUIRE(stirling2(6, 0) == 0);
    REQUIRE_THROWS_AS(stirling2(65, 2), std::invalid_argument);

    // the double route tracks the exact one
    for (int s = 0; s <= 20; ++s)
        for (int m = 0; m <= s; ++m) {
            double expected = static_cast<double>(static_cast<long double>(stirling2(s, m)));
            REQUIRE(stirling2_double(s, m) == Catch::Approx(expected).epsilon(1e-12));
        }
}

TEST_CASE("alternating moments match stirling closed form") {
    REQUIRE(alternating_moment(2, 2) == 2);
    REQUIRE(alternating_moment(2, 1) == 0);
    REQUIRE(alternating_moment(4, 4) == 24);

    for (int m = 0; m <= 12; ++m)
        for (int s = 0; s <= 12; ++s) {
            Int128 rhs = checked_mul(stirling2(s, m), factorial_i128(m));
            if (m % 2 != 0) rhs = -rhs;
            REQUIRE(alternating_moment(m, s) == rhs);
        }

    // degree annihilation: s < m kills the sum
    for (int m = 1; m <= 12; ++m)
        for (int s = 0; s < m; ++s) REQUIRE(alternating_moment(m, s) == 0);
}

TEST_CASE("parity distributions sum to one exactly") {
    for (int m = 1; m <= 16; ++m) {
        auto even = ParityDistribution::make(m, Parity::Even);
        auto odd = ParityDistribution::make(m, Parity::Odd);
        REQUIRE(even.sums_to_one());
        REQUIRE(odd.sums_to_one());
    }
}

TEST_CASE("gap expectation on the asymmetric 2x2 family") {
    auto rep = gap_expectation(SpectralFunction::power(1), 2, 2, 1.0, BlockKind::Asymmetric);
    REQUIRE(rep.even_expectation == Catch::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    REQUIRE(rep.odd_expectation == Catch::Approx(2.7979326519).epsilon(1e-9));
    REQUIRE(rep.gap == Catch::Approx(-0.1798986632).epsilon(1e-8));
    REQUIRE(rep.verdict == GapVerdict::NonZero);

    // sum sigma^2 = m^2 + gamma k is degree-1 in k: annihilated
    auto zero = gap_expectation(SpectralFunction::power(2), 2, 2, 1.0, BlockKind::Asymmetric);
    REQUIRE(std::abs(zero.gap) < 1e-10);
    REQUIRE(zero.verdict == GapVerdict::Zero);

    REQUIRE_THROWS_AS(gap_expectation(SpectralFunction::power(1), 3, 4, 1.0, BlockKind::Asymmetric),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        gap_expectation(SpectralFunction::entropy_h(), 2, 2, 1.0, BlockKind::Asymmetric),
        std::invalid_argument);
}

TEST_CASE("symmetric even-power gaps run in exact arithmetic") {
    auto rep = gap_expectation(SpectralFunction::power(4), 2, 2, 1.0, BlockKind::SymmetricEvenP);
    REQUIRE(rep.exact_arithmetic);
    REQUIRE(rep.even_expectation == Catch::Approx(9.0));
    REQUIRE(rep.odd_expectation == Catch::Approx(7.0));
    REQUIRE(rep.gap == 2.0);
    REQUIRE(rep.verdict == GapVerdict::NonZero);

    auto zero = gap_expectation(SpectralFunction::power(4), 4, 4, 1.0, BlockKind::SymmetricEvenP);
    REQUIRE(zero.gap == 0.0);
    REQUIRE(zero.verdict == GapVerdict::Zero);
}

TEST_CASE("threshold table: gap nonzero iff t <= p/2") {
    for (int p : {4, 6, 8}) {
        for (int t : {2, 4, 6, 8}) {
            auto rep =
                gap_expectation(SpectralFunction::power(p), t, t, 1.0, BlockKind::SymmetricEvenP);
            bool expect_nonzero = t <= p / 2;
            INFO("p=" << p << " t=" << t);
            REQUIRE((rep.verdict == GapVerdict::NonZero) == expect_nonzero);
        }
    }
}

TEST_CASE("non-even p gives nonzero gaps; p = 2 vanishes") {
    for (double p : {0.5, 1.0, 1.5, 2.5, 3.0}) {
        for (int t : {2, 4}) {
            auto rep = gap_expectation(SpectralFunction::power(p), t, t, 0.5,
                                       BlockKind::Asymmetric);
            INFO("p=" << p << " t=" << t);
            REQUIRE(rep.verdict == GapVerdict::NonZero);
        }
    }
    for (int t : {2, 4}) {
        auto rep = gap_expectation(SpectralFunction::power(2), t, t, 0.5, BlockKind::Asymmetric);
        REQUIRE(rep.verdict == GapVerdict::Zero);
    }
}

TEST_CASE("single-root contribution is nonzero for even p at large m") {
    for (int m : {8, 10, 12}) {
        for (int p : {4, 6}) {
            // G2 for the symmetric instance: alternating sum over r2(k)^p
            long double g2 = 0;
            for (int k = 0; k <= m; ++k) {
                auto [r1, r2] = symmetric_roots(m, k);
                long double c = static_cast<long double>(static_cast<double>(binomial(m, k)));
                g2 += ((k % 2 == 0) ? 1 : -1) * c * std::pow(static_cast<long double>(r2), p);
            }
            INFO("m=" << m << " p=" << p);
            REQUIRE(std::abs(static_cast<double>(g2)) > 1e-10);
        }
    }
}

TEST_CASE("direct G sums") {
    // r1 + r2 = m^2 + gamma is constant in k, so p = 1 vanishes
    auto g1 = g_sums_direct(1.0, 2, 1.0);
    REQUIRE(g1.sum() == Catch::Approx(0.0).margin(1e-12));

    // r1^2 + r2^2 is degree-1 in k, so p = 2 vanishes as well
    auto g2 = g_sums_direct(2.0, 2, 1.0);
    REQUIRE(g2.sum() == Catch::Approx(0.0).margin(1e-10));

    // non-integer p: nonzero, with G1 negligible against G2 at small gamma
    auto g = g_sums_direct(0.5, 4, 0.01);
    REQUIRE(std::abs(g.sum()) > 1e-12);
    REQUIRE(std::abs(g.g1) < std::abs(g.g2));
}

TEST_CASE("series coefficients: dual formulas and partial sums") {
    auto coeffs = series_coefficients(1.0, 4, 0.5, 40);
    REQUIRE(coeffs.max_dual_deviation() < 1e-9);

    // constant terms
    REQUIRE(coeffs.a[0] == Catch::Approx(std::pow(4.0, 2.0)).epsilon(1e-14));
    REQUIRE(coeffs.b[0] == Catch::Approx(0.5).epsilon(1e-14));

    // partial sums reproduce the closed-form roots
    auto [r1, r2] = asymmetric_roots(4, 2, 0.5);
    REQUIRE(coeffs.partial_sum_r1(2.0) == Catch::Approx(r1).epsilon(1e-8));
    REQUIRE(coeffs.partial_sum_r2(2.0) == Catch::Approx(r2).epsilon(1e-8));

    for (double p : {0.5, 1.0}) {
        for (int m : {4, 6}) {
            auto c = series_coefficients(p, m, 0.5, 60);
            REQUIRE(c.max_dual_deviation() < 1e-9);
            // r1(k)^p has no singularity for k in [0, m]: exact reproduction
            for (int k = 0; k <= m; ++k) {
                auto [t1, t2] = asymmetric_roots(m, k, 0.5);
                REQUIRE(c.partial_sum_r1(k) ==
                        Catch::Approx(std::pow(t1, p)).epsilon(1e-8).margin(1e-8));
            }
            // r2(k)^p: geometric inside the disk; for non-integer p the
            // branch point r2(m) = 0 caps accuracy near k = m
            int k_hi = (p == 1.0) ? m : m - 2;
            for (int k = 0; k <= k_hi; ++k) {
                auto [t1, t2] = asymmetric_roots(m, k, 0.5);
                double want = t2 > 0 ? std::pow(t2, p) : 0.0;
                REQUIRE(c.partial_sum_r2(k) == Catch::Approx(want).epsilon(1e-8).margin(1e-8));
            }
        }
    }

    // at the boundary point k = m the truncation error decays, but only
    // algebraically (branch point on the circle of convergence)
    {
        double prev = 1e9;
        for (int smax : {20, 40, 60}) {
            auto c = series_coefficients(0.5, 4, 0.5, smax);
            double err = std::abs(c.partial_sum_r2(4.0));  // r2(4)^0.5 = 0
            REQUIRE(err < prev);
            REQUIRE(err < 0.1);
            prev = err;
        }
    }

    REQUIRE_THROWS_AS(series_coefficients(1.0, 4, 5.0, 40), std::invalid_argument);
}

TEST_CASE("B_s keeps one sign beyond s = m in the small-gamma regime") {
    auto coeffs = series_coefficients(0.5, 8, 0.01, 40);
    int ref = coeffs.b[8] > 0 ? 1 : -1;
    for (int s = 8; s <= 40; ++s) {
        INFO("s=" << s);
        double v = coeffs.b[std::size_t(s)];
        REQUIRE(v * ref > 0.0);
    }
}

TEST_CASE("series G sums agree with the direct route") {
    auto coeffs = series_coefficients(1.0, 4, 0.5, 60);
    auto series = series_g_sums(coeffs);
    auto direct = g_sums_direct(1.0, 4, 0.5);
    double scale = std::max(std::abs(direct.g1), std::abs(direct.g2));
    REQUIRE(std::abs(series.g1 - direct.g1) / scale < 1e-6);
    REQUIRE(std::abs(series.g2 - direct.g2) / scale < 1e-6);

    // p = 2: both routes agree on (near) zero
    auto s2 = series_g_sums(series_coefficients(2.0, 2, 0.5, 40));
    REQUIRE(s2.sum() == Catch::Approx(0.0).margin(1e-8));

    // G2's sign stabilizes as the truncation grows
    int stable_sign = 0;
    for (int smax = 12; smax <= 60; smax += 8) {
        auto g = series_g_sums(series_coefficients(0.5, 6, 0.01, smax));
        int sg = g.g2 > 0 ? 1 : -1;
        if (stable_sign == 0) stable_sign = sg;
        REQUIRE(sg == stable_sign);
    }
}

TEST_CASE("terminating 2F1") {
    REQUIRE(hyp2f1_terminating(0, 3.5, 2.2, 0.7) == 1.0);

    // Euler transformation at the quoted point
    double p = 0.5;
    int s = 6;
    double x = 0.05;
    double lhs = hyp2f1_terminating(1.0 - s, 1.0 + p - 2 * s, 1.0 + p - s, x);
    double rhs = std::pow(1.0 - x, 2.0 * s - 1.0) * hyp2f1_series(p, s, 1.0 + p - s, x);
    REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-10));

    // Chu-Vandermonde zero, exact: s=5, j=1, k=2 -> p = 8
    REQUIRE(hyp2f1_terminating(1.0 + 1 - 8, 1.0 + 1 - 5, 2.0 + 1 - 10, 1.0) == 0.0);

    REQUIRE_THROWS_AS(hyp2f1_terminating(0.5, 1.0, 2.0, 0.3), std::invalid_argument);
    REQUIRE_THROWS_AS(hyp2f1_terminating(-4, 1.0, -2.0, 0.3), std::invalid_argument);
}

TEST_CASE("entropy gap") {
    auto g4 = entropy_gap(4);
    REQUIRE(g4.verdict_claimed);
    REQUIRE(g4.nonzero);
    REQUIRE(std::abs(g4.sum()) > 1e-12);

    auto g2 = entropy_gap(2);
    REQUIRE_FALSE(g2.verdict_claimed);  // below the large-m regime; value only

    REQUIRE_THROWS_AS(entropy_gap(5), std::invalid_argument);

    // consistency with the block-additive gap machinery at gamma = 1:
    // gap = (G1 + G2) / 2^{m-1} since sqrt(gamma) = 1 kills the gamma term
    for (int m : {4, 6}) {
        auto g = entropy_gap(m);
        auto rep = gap_expectation(SpectralFunction::entropy_h_raw(), m, m, 1.0,
                                   BlockKind::Asymmetric);
        double norm = std::pow(2.0, m - 1);
        REQUIRE(rep.gap == Catch::Approx(g.sum() / norm).epsilon(1e-9).margin(1e-12));
    }
}

TEST_CASE("verify suites pass") {
    for (const char* suite : {"stirling", "hypergeom", "series", "entropy"}) {
        auto checks = run_verify_suite(suite);
        for (const auto& c : checks) {
            INFO(suite << " / " << c.name << " dev=" << c.max_deviation);
            REQUIRE(c.pass);
        }
    }
    REQUIRE_THROWS_AS(run_verify_suite("nope"), std::invalid_argument);
}
