#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "specstream/blocks.hpp"
#include "specstream/dense_matrix.hpp"
#include "specstream/rng.hpp"
#include "specstream/spectral_function.hpp"
#include "specstream/svd.hpp"

using namespace specstream;

namespace {
constexpr double kPhi = 1.6180339887498949;      // (sqrt(5)+1)/2
constexpr double kPsi = 0.6180339887498949;      // (sqrt(5)-1)/2
}

TEST_CASE("svd oracle on known 2x2 spectra") {
    auto a = singular_values(DenseMatrix{{0, 1}, {1, 0}});
    REQUIRE(a.values[0] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(a.values[1] == Catch::Approx(1.0).margin(1e-12));

    auto b = singular_values(DenseMatrix{{1, 1}, {1, 0}});
    REQUIRE(b.values[0] == Catch::Approx(kPhi).epsilon(1e-12));
    REQUIRE(b.values[1] == Catch::Approx(kPsi).epsilon(1e-12));

    auto c = singular_values(DenseMatrix{{1, 1}, {1, 1}});
    REQUIRE(c.values[0] == Catch::Approx(2.0).epsilon(1e-12));
    REQUIRE(c.values[1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("svd oracle edge cases") {
    auto z = singular_values(DenseMatrix(3, 3));
    REQUIRE(z.values == std::vector<double>{0, 0, 0});

    REQUIRE_THROWS_AS(singular_values(DenseMatrix(2, 3)), std::invalid_argument);
    REQUIRE_THROWS_AS(singular_values(DenseMatrix(513, 513)), std::invalid_argument);
}

TEST_CASE("svd oracle frobenius consistency on random matrices") {
    Rng rng(7);
    for (int rep = 0; rep < 5; ++rep) {
        std::size_t n = 10 + 7 * std::size_t(rep);
        DenseMatrix a(n, n);
        for (auto& v : a.entries) v = double(rng.range(-5, 5));
        auto s = singular_values(a);
        REQUIRE(s.frobenius_sq() == Catch::Approx(a.frobenius_sq()).epsilon(1e-10));
    }
}

TEST_CASE("asymmetric block spectra match the quadratic roots") {
    // k = 0: one nonzero singular value m
    auto s0 = spectrum_asymmetric({2, 0, 1.0, BlockKind::Asymmetric});
    REQUIRE(s0.dim == 4);
    REQUIRE(s0.values[0] == Catch::Approx(2.0));
    REQUIRE(s0.rank(1e-12) == 1);

    // k = m: sqrt(m^2 + gamma) and sqrt(gamma) x (m-1)
    auto sm = spectrum_asymmetric({2, 2, 1.0, BlockKind::Asymmetric});
    REQUIRE(sm.values[0] == Catch::Approx(std::sqrt(5.0)).epsilon(1e-14));
    REQUIRE(sm.values[1] == Catch::Approx(1.0));

    // interior k: square roots of the quadratic's roots
    auto s1 = spectrum_asymmetric({2, 1, 1.0, BlockKind::Asymmetric});
    REQUIRE(s1.values[0] == Catch::Approx(std::sqrt((5.0 + std::sqrt(17.0)) / 2.0)).epsilon(1e-14));
    REQUIRE(s1.values[1] == Catch::Approx(std::sqrt((5.0 - std::sqrt(17.0)) / 2.0)).epsilon(1e-14));
    REQUIRE(s1.values[0] == Catch::Approx(2.1357792).epsilon(1e-6));
    REQUIRE(s1.values[1] == Catch::Approx(0.6621535).epsilon(1e-6));
}

TEST_CASE("symmetric block spectra") {
    auto s0 = spectrum_symmetric({2, 0, 1.0, BlockKind::SymmetricEvenP});
    REQUIRE(s0.values == std::vector<double>{1.0, 1.0});

    auto s1 = spectrum_symmetric({2, 1, 1.0, BlockKind::SymmetricEvenP});
    REQUIRE(s1.values[0] == Catch::Approx(kPhi).epsilon(1e-14));
    REQUIRE(s1.values[1] == Catch::Approx(kPsi).epsilon(1e-14));

    auto s2 = spectrum_symmetric({2, 2, 1.0, BlockKind::SymmetricEvenP});
    REQUIRE(s2.values == std::vector<double>{2.0, 0.0});
}

TEST_CASE("block parameter validation") {
    REQUIRE_THROWS_AS(spectrum_asymmetric({2, 3, 1.0, BlockKind::Asymmetric}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(spectrum_asymmetric({2, 1, -1.0, BlockKind::Asymmetric}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(spectrum_symmetric({2, 1, 2.0, BlockKind::SymmetricEvenP}),
                      std::invalid_argument);
}

TEST_CASE("build_block matches the definitions") {
    auto a = build_block({2, 1, 4.0, BlockKind::Asymmetric});
    DenseMatrix want{{1, 1, 0, 0}, {1, 1, 0, 0}, {2, 0, 0, 0}, {0, 0, 0, 0}};
    REQUIRE(a.entries == want.entries);

    auto b = build_block({2, 1, 1.0, BlockKind::SymmetricEvenP});
    REQUIRE(b.entries == DenseMatrix{{1, 1}, {1, 0}}.entries);

    auto c = build_block({2, 2, 1.0, BlockKind::SymmetricEvenP});
    REQUIRE(c.entries == DenseMatrix{{1, 1}, {1, 1}}.entries);
}

TEST_CASE("closed-form spectra agree with the svd oracle across the grid") {
    for (int m = 2; m <= 8; ++m) {
        for (int k = 0; k <= m; ++k) {
            for (double gamma : {0.1, 1.0, 4.0}) {
                BlockParams ap{m, k, gamma, BlockKind::Asymmetric};
                auto closed = spectrum_asymmetric(ap);
                auto numeric = singular_values(build_block(ap));
                REQUIRE(closed.values.size() == numeric.values.size());
                for (std::size_t i = 0; i < closed.values.size(); ++i)
                    REQUIRE(closed.values[i] == Catch::Approx(numeric.values[i]).margin(1e-8));
            }
            BlockParams sp{m, k, 1.0, BlockKind::SymmetricEvenP};
            auto closed = spectrum_symmetric(sp);
            auto numeric = singular_values(build_block(sp));
            for (std::size_t i = 0; i < closed.values.size(); ++i)
                REQUIRE(closed.values[i] == Catch::Approx(numeric.values[i]).margin(1e-8));
        }
    }
}

TEST_CASE("asymmetric trace and rank checks") {
    for (int m = 2; m <= 8; ++m) {
        for (int k = 0; k <= m; ++k) {
            for (double gamma : {0.1, 1.0, 4.0}) {
                auto s = spectrum_asymmetric({m, k, gamma, BlockKind::Asymmetric});
                REQUIRE(s.frobenius_sq() ==
                        Catch::Approx(double(m) * m + gamma * k).epsilon(1e-12));
                if (k >= 1 && k <= m - 1) REQUIRE(s.rank(1e-12) == std::size_t(k) + 1);
            }
        }
    }
}

TEST_CASE("block-diagonal spectrum is the multiset union") {
    std::vector<BlockParams> single{{2, 0, 1.0, BlockKind::Asymmetric}};
    auto s = spectrum_block_diagonal(single);
    REQUIRE(s.values[0] == Catch::Approx(2.0));
    REQUIRE(s.dim == 4);

    std::vector<BlockParams> two{{2, 0, 1.0, BlockKind::Asymmetric},
                                 {2, 2, 1.0, BlockKind::Asymmetric}};
    auto u = spectrum_block_diagonal(two);
    REQUIRE(u.dim == 8);
    REQUIRE(u.values[0] == Catch::Approx(std::sqrt(5.0)));
    REQUIRE(u.values[1] == Catch::Approx(2.0));
    REQUIRE(u.values[2] == Catch::Approx(1.0));

    // cross-check against the svd of the explicit 8x8 block-diagonal matrix
    DenseMatrix big(8, 8);
    auto b0 = build_block(two[0]);
    auto b1 = build_block(two[1]);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            big.at(i, j) = b0.at(i, j);
            big.at(4 + i, 4 + j) = b1.at(i, j);
        }
    auto numeric = singular_values(big);
    for (std::size_t i = 0; i < 8; ++i)
        REQUIRE(u.values[i] == Catch::Approx(numeric.values[i]).margin(1e-8));

    REQUIRE_THROWS_AS(spectrum_block_diagonal(std::vector<BlockParams>{}),
                      std::invalid_argument);
}

TEST_CASE("power function evaluation") {
    Spectrum golden({kPhi, kPsi}, 2);
    REQUIRE(SpectralFunction::power(4).evaluate(golden) == Catch::Approx(7.0).epsilon(1e-12));

    // 0^p := 0
    Spectrum with_zeros({3.0}, 4);
    REQUIRE(SpectralFunction::power(0.5).evaluate(with_zeros) ==
            Catch::Approx(std::sqrt(3.0)).epsilon(1e-14));

    // |s|_2^2 exactly for exactly-representable inputs
    Spectrum exact({3.0, 2.0, 1.0}, 3);
    REQUIRE(SpectralFunction::power(2).evaluate(exact) == 14.0);
}

TEST_CASE("entropy variants") {
    Spectrum uniform({1.0, 1.0}, 2);
    REQUIRE(SpectralFunction::shannon_entropy().evaluate(uniform) ==
            Catch::Approx(std::log(2.0)).epsilon(1e-14));

    // normalized h-entropy: sum h(sigma/|s|), h(x) = x^2 ln x^2
    double expected = 2.0 * 0.5 * std::log(0.5);
    REQUIRE(SpectralFunction::entropy_h().evaluate(uniform) ==
            Catch::Approx(expected).epsilon(1e-14));

    // unnormalized form is block-additive
    Spectrum s({2.0, 1.0}, 2);
    REQUIRE(SpectralFunction::entropy_h_raw().evaluate(s) ==
            Catch::Approx(4.0 * std::log(4.0)).epsilon(1e-14));

    Spectrum zero({}, 3);
    REQUIRE_THROWS_AS(SpectralFunction::entropy_h().evaluate(zero), std::invalid_argument);
    REQUIRE_THROWS_AS(SpectralFunction::shannon_entropy().evaluate(zero), std::invalid_argument);
}

TEST_CASE("shrinkers vanish below the bulk edge") {
    for (double alpha : {0.25, 1.0, 2.0}) {
        double edge = 1.0 + std::sqrt(alpha);
        for (int variant : {1, 2, 3}) {
            auto f = SpectralFunction::shrinker(variant, alpha);
            REQUIRE(f.scalar(edge * 0.999) == 0.0);
            REQUIRE(f.scalar(edge + 2.0) > 0.0);
        }
        // the Frobenius-loss shrinker is continuous at the edge
        auto eta1 = SpectralFunction::shrinker(1, alpha);
        REQUIRE(eta1.scalar(edge) == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(eta1.scalar(edge + 1e-7) == Catch::Approx(0.0).margin(1e-3));
        // the operator-loss shrinker jumps to alpha^{1/4} there
        auto eta2 = SpectralFunction::shrinker(2, alpha);
        REQUIRE(eta2.scalar(edge) == Catch::Approx(std::pow(alpha, 0.25)).epsilon(1e-9));
        // and the third variant starts at 0 again
        auto eta3 = SpectralFunction::shrinker(3, alpha);
        REQUIRE(eta3.scalar(edge) == Catch::Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("ky-fan sums") {
    Spectrum s({3.0, 2.0, 1.0}, 5);
    REQUIRE(SpectralFunction::ky_fan(1).evaluate(s) == 3.0);
    REQUIRE(SpectralFunction::ky_fan(2).evaluate(s) == 5.0);
    // k beyond the rank picks up explicit zeros
    REQUIRE(SpectralFunction::ky_fan(5).evaluate(s) == 6.0);
    REQUIRE_THROWS_AS(SpectralFunction::ky_fan(0), std::invalid_argument);
}

TEST_CASE("m-estimators at zero and large x") {
    for (auto kind : {MEstimatorKind::L1L2, MEstimatorKind::GemanMcClure, MEstimatorKind::Fair,
                      MEstimatorKind::Welsch, MEstimatorKind::Huber, MEstimatorKind::Tukey,
                      MEstimatorKind::Cauchy}) {
        auto f = SpectralFunction::m_estimator(kind);
        REQUIRE(f.scalar(0.0) == 0.0);
        REQUIRE(std::isfinite(f.scalar(100.0)));
    }
    // Tukey saturates at c^2/6
    auto tukey = SpectralFunction::m_estimator(MEstimatorKind::Tukey, 2.0);
    REQUIRE(tukey.scalar(5.0) == Catch::Approx(4.0 / 6.0).epsilon(1e-14));
    // Huber is quadratic below the knee
    auto huber = SpectralFunction::m_estimator(MEstimatorKind::Huber, 1.345);
    REQUIRE(huber.scalar(1.0) == Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("function spec parsing round-trips") {
    for (const char* spec : {"power:4", "entropy", "entropy_raw", "shannon", "kyfan:3:power:1",
                             "shrinker:1:1", "mest:huber:1.345"}) {
        auto f = SpectralFunction::parse(spec);
        auto again = SpectralFunction::parse(f.name());
        REQUIRE(f.name() == again.name());
    }
    REQUIRE_THROWS_AS(SpectralFunction::parse("nope"), std::invalid_argument);
}

TEST_CASE("dense matrix text format round-trips") {
    DenseMatrix a{{1.5, -2.25}, {0.0, 3.125}};
    std::stringstream ss;
    save_matrix(a, ss);
    DenseMatrix b = load_matrix(ss);
    REQUIRE(b.n_rows == 2);
    REQUIRE(b.n_cols == 2);
    REQUIRE(b.entries == a.entries);

    std::stringstream bad("2 2\n1 2 3");
    REQUIRE_THROWS(load_matrix(bad));
}
