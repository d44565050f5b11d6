#pragma once

// Numeric singular-value oracle for small dense matrices: one-sided Jacobi,
// orthogonalizing column pairs until the relative off-diagonal mass
// |<c_i, c_j>| / (|c_i| |c_j|) drops below tolerance everywhere.

#include <cmath>
#include <stdexcept>

#include "specstream/dense_matrix.hpp"
#include "specstream/spectrum.hpp"

namespace specstream {

struct SvdOptions {
    double tolerance = 1e-12;  // off-diagonal mass, relative
    int max_sweeps = 64;
    std::size_t max_dim = 512;
};

inline Spectrum singular_values(const DenseMatrix& input, const SvdOptions& opt = {}) {
    if (!input.square()) throw std::invalid_argument("svd oracle expects a square matrix");
    const std::size_t n = input.n_rows;
    if (n > opt.max_dim) throw std::invalid_argument("svd oracle is limited to desk-scale matrices");
    input.check_finite();

    if (n == 0) return Spectrum({}, 0);

    DenseMatrix a = input;  // columns get rotated in place
    auto col_dot = [&](std::size_t p, std::size_t q) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += a.at(i, p) * a.at(i, q);
        return s;
    };

    // columns this far below the matrix scale are numerically zero
    const double column_floor = input.frobenius_sq() * 1e-30;

    bool converged = false;
    for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = col_dot(p, p);
                double aqq = col_dot(q, q);
                double apq = col_dot(p, q);
                if (app <= column_floor || aqq <= column_floor) continue;
                if (std::abs(apq) <= opt.tolerance * std::sqrt(app * aqq)) continue;
                converged = false;
                double zeta = (aqq - app) / (2.0 * apq);
                double t = (zeta >= 0 ? 1.0 : -1.0) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    double vp = a.at(i, p);
                    double vq = a.at(i, q);
                    a.at(i, p) = c * vp - s * vq;
                    a.at(i, q) = s * vp + c * vq;
                }
            }
        }
    }
    if (!converged) throw std::runtime_error("svd oracle: no convergence within sweep budget");

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(col_dot(j, j));
    return Spectrum(std::move(sigma), n);
}

}  // namespace specstream
