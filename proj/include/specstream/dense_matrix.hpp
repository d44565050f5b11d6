#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace specstream {

// Row-major dense matrix. Text format: first line "n_rows n_cols", then one
// row per line of space-separated decimal reals.
struct DenseMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> entries;

    DenseMatrix() = default;

    DenseMatrix(std::size_t r, std::size_t c)
        : n_rows(r), n_cols(c), entries(r * c, 0.0) {}

    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
        n_rows = rows.size();
        n_cols = n_rows ? rows.begin()->size() : 0;
        entries.reserve(n_rows * n_cols);
        for (const auto& row : rows) {
            if (row.size() != n_cols) throw std::invalid_argument("ragged initializer");
            for (double v : row) entries.push_back(v);
        }
    }

    double& at(std::size_t i, std::size_t j) { return entries[i * n_cols + j]; }
    double at(std::size_t i, std::size_t j) const { return entries[i * n_cols + j]; }

    bool square() const { return n_rows == n_cols; }

    double frobenius_sq() const {
        double s = 0;
        for (double v : entries) s += v * v;
        return s;
    }

    void check_finite() const {
        for (double v : entries) {
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite matrix entry");
        }
    }
};

inline DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.n_cols, a.n_rows);
    for (std::size_t i = 0; i < a.n_rows; ++i)
        for (std::size_t j = 0; j < a.n_cols; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.n_cols != b.n_rows) throw std::invalid_argument("shape mismatch in multiply");
    DenseMatrix c(a.n_rows, b.n_cols);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        for (std::size_t k = 0; k < a.n_cols; ++k) {
            double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.n_cols; ++j) c.at(i, j) += aik * b.at(k, j);
        }
    }
    return c;
}

inline void save_matrix(const DenseMatrix& a, std::ostream& out) {
    out << a.n_rows << ' ' << a.n_cols << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        for (std::size_t j = 0; j < a.n_cols; ++j) {
            if (j) out << ' ';
            out << a.at(i, j);
        }
        out << '\n';
    }
}

inline void save_matrix(const DenseMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    save_matrix(a, out);
}

inline DenseMatrix load_matrix(std::istream& in) {
    std::size_t r = 0, c = 0;
    if (!(in >> r >> c)) throw std::runtime_error("matrix header: expected 'n_rows n_cols'");
    DenseMatrix a(r, c);
    for (std::size_t i = 0; i < r * c; ++i) {
        if (!(in >> a.entries[i])) throw std::runtime_error("matrix body: too few entries");
    }
    a.check_finite();
    return a;
}

inline DenseMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_matrix(in);
}

}  // namespace specstream
