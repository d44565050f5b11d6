#pragma once

// Hard-instance blocks and their closed-form spectra.
//
// Asymmetric block (2m x 2m):  [ J_m        0 ]      J_m = all-ones
//                              [ sqrt(g) D  0 ]      D = diag(1 x k, 0 x m-k)
// Its nonzero singular values are sqrt(gamma) with multiplicity k-1 plus
// sqrt(r1), sqrt(r2), where r1, r2 solve x^2 - (m^2+gamma) x + (m^2-km) gamma = 0.
//
// Symmetric block (m x m): J_m - I_m + D. Singular values are
// r_{1,2}(k) = (sqrt((m-1)^2+4k) +/- (m-1)) / 2 plus m-k-1 ones.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "specstream/dense_matrix.hpp"
#include "specstream/spectrum.hpp"

namespace specstream {

enum class BlockKind { Asymmetric, SymmetricEvenP };

struct BlockParams {
    int m = 2;
    int k = 0;
    double gamma = 1.0;
    BlockKind kind = BlockKind::Asymmetric;

    void validate() const {
        if (m < 2) throw std::invalid_argument("block dimension m must be >= 2");
        if (k < 0 || k > m) throw std::invalid_argument("tentacle count k must be in [0, m]");
        if (kind == BlockKind::Asymmetric) {
            if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
        } else if (gamma != 1.0) {
            throw std::invalid_argument("symmetric blocks take no gamma (leave it 1)");
        }
    }

    std::size_t dim() const { return kind == BlockKind::Asymmetric ? 2 * std::size_t(m) : std::size_t(m); }
};

// Roots of the asymmetric block quadratic; r1 >= r2 >= 0. The smaller root
// comes from the product r1 r2 = (m^2 - km) gamma, which avoids the
// cancellation in the explicit half-difference.
inline std::pair<long double, long double> asymmetric_roots_l(int m, int k, long double gamma) {
    long double m2 = static_cast<long double>(m) * m;
    long double disc = (m2 - gamma) * (m2 - gamma) + 4.0L * gamma * k * m;
    long double r1 = 0.5L * (m2 + gamma + std::sqrt(disc));
    long double r2 = (m2 - static_cast<long double>(k) * m) * gamma / r1;
    return {r1, r2};
}

inline std::pair<double, double> asymmetric_roots(int m, int k, double gamma) {
    auto [r1, r2] = asymmetric_roots_l(m, k, gamma);
    return {static_cast<double>(r1), static_cast<double>(r2)};
}

// Singular values of the symmetric block's rank-2 part; r1 >= r2 >= 0.
inline std::pair<double, double> symmetric_roots(int m, int k) {
    double a = m - 1.0;
    double root = std::sqrt(a * a + 4.0 * k);
    return {0.5 * (root + a), 0.5 * (root - a)};
}

inline Spectrum spectrum_asymmetric(const BlockParams& p) {
    if (p.kind != BlockKind::Asymmetric) throw std::invalid_argument("expected an asymmetric block");
    p.validate();
    std::vector<double> vals;
    const double sg = std::sqrt(p.gamma);
    if (p.k == 0) {
        vals.push_back(double(p.m));
    } else if (p.k == p.m) {
        vals.push_back(std::sqrt(double(p.m) * p.m + p.gamma));
        vals.insert(vals.end(), std::size_t(p.m - 1), sg);
    } else {
        auto [r1, r2] = asymmetric_roots(p.m, p.k, p.gamma);
        vals.push_back(std::sqrt(r1));
        vals.push_back(std::sqrt(r2));
        vals.insert(vals.end(), std::size_t(p.k - 1), sg);
    }
    return Spectrum(std::move(vals), p.dim());
}

inline Spectrum spectrum_symmetric(const BlockParams& p) {
    if (p.kind != BlockKind::SymmetricEvenP) throw std::invalid_argument("expected a symmetric block");
    p.validate();
    std::vector<double> vals;
    if (p.k == 0) {
        vals.push_back(p.m - 1.0);
        vals.insert(vals.end(), std::size_t(p.m - 1), 1.0);
    } else if (p.k == p.m) {
        vals.push_back(double(p.m));
    } else {
        auto [r1, r2] = symmetric_roots(p.m, p.k);
        vals.push_back(r1);
        vals.push_back(r2);
        vals.insert(vals.end(), std::size_t(p.m - p.k - 1), 1.0);
    }
    return Spectrum(std::move(vals), p.dim());
}

inline Spectrum block_spectrum(const BlockParams& p) {
    return p.kind == BlockKind::Asymmetric ? spectrum_asymmetric(p) : spectrum_symmetric(p);
}

inline DenseMatrix build_block(const BlockParams& p) {
    p.validate();
    const std::size_t m = std::size_t(p.m);
    if (p.kind == BlockKind::Asymmetric) {
        DenseMatrix a(2 * m, 2 * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) a.at(i, j) = 1.0;
        const double sg = std::sqrt(p.gamma);
        for (std::size_t i = 0; i < std::size_t(p.k); ++i) a.at(m + i, i) = sg;
        return a;
    }
    DenseMatrix a(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a.at(i, j) = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        if (i >= std::size_t(p.k)) a.at(i, i) = 0.0;  // J - I + D
    return a;
}

inline Spectrum spectrum_block_diagonal(std::span<const BlockParams> blocks) {
    if (blocks.empty()) throw std::invalid_argument("block list must be nonempty");
    std::vector<double> vals;
    std::size_t dim = 0;
    for (const auto& b : blocks) {
        Spectrum s = block_spectrum(b);
        vals.insert(vals.end(), s.values.begin(), s.values.end());
        dim += s.dim;
    }
    return Spectrum(std::move(vals), dim);
}

inline Spectrum spectrum_block_diagonal(const std::vector<BlockParams>& blocks) {
    return spectrum_block_diagonal(std::span<const BlockParams>(blocks));
}

}  // namespace specstream
