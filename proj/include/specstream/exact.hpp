#pragma once

// Exact values of |A|_p^p for even p: the cyclic inner-product sum over row
// tuples, walked over the support-overlap graph of the rows. Tests pin this
// against trace((A^T A)^{p/2}) and against the singular-value route.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "specstream/dense_matrix.hpp"

namespace specstream {

struct SparseVector {
    std::vector<std::pair<std::uint32_t, double>> items;  // (index, value), ascending

    double dot(const SparseVector& o) const {
        double acc = 0;
        std::size_t i = 0, j = 0;
        while (i < items.size() && j < o.items.size()) {
            if (items[i].first < o.items[j].first) ++i;
            else if (items[i].first > o.items[j].first) ++j;
            else acc += items[i].second * o.items[j].second, ++i, ++j;
        }
        return acc;
    }
};

// Row-Gram adjacency: g[i] lists (j, <a_i, a_j>) for rows sharing support.
inline std::vector<std::vector<std::pair<std::uint32_t, double>>> row_gram(
    const std::vector<SparseVector>& rows, std::size_t n_cols) {
    std::vector<std::vector<std::uint32_t>> col_to_rows(n_cols);
    for (std::uint32_t i = 0; i < rows.size(); ++i)
        for (const auto& [c, v] : rows[i].items) col_to_rows[c].push_back(i);

    std::vector<std::vector<std::pair<std::uint32_t, double>>> gram(rows.size());
    std::vector<std::uint32_t> stamp(rows.size(), UINT32_MAX);
    for (std::uint32_t i = 0; i < rows.size(); ++i) {
        for (const auto& [c, v] : rows[i].items) {
            for (std::uint32_t j : col_to_rows[c]) {
                if (stamp[j] == i) continue;
                stamp[j] = i;
                double d = rows[i].dot(rows[j]);
                if (d != 0.0) gram[i].push_back({j, d});
            }
        }
    }
    return gram;
}

inline std::vector<SparseVector> sparse_rows(const DenseMatrix& a) {
    std::vector<SparseVector> rows(a.n_rows);
    for (std::size_t i = 0; i < a.n_rows; ++i)
        for (std::size_t j = 0; j < a.n_cols; ++j)
            if (a.at(i, j) != 0.0)
                rows[i].items.push_back({static_cast<std::uint32_t>(j), a.at(i, j)});
    return rows;
}

// sum over (i_1..i_q) of prod_j <a_{i_j}, a_{i_{j+1}}> with i_{q+1} = i_1,
// q = p/2: the cyclic form of |A|_p^p for even p.
inline double exact_schatten_even(const DenseMatrix& a, int p) {
    if (!a.square()) throw std::invalid_argument("exact_schatten_even expects a square matrix");
    if (p < 2 || p % 2 != 0) throw std::invalid_argument("exact_schatten_even: p must be even, >= 2");
    const int q = p / 2;
    auto rows = sparse_rows(a);
    auto gram = row_gram(rows, a.n_cols);

    // chase gram chains of length q that close the cycle
    long double total = 0;
    for (std::uint32_t start = 0; start < rows.size(); ++start) {
        // value_at[j] = sum over open chains start -> ... -> j of the product
        std::vector<std::pair<std::uint32_t, long double>> frontier{{start, 1.0L}};
        for (int step = 0; step < q - 1; ++step) {
            std::vector<std::pair<std::uint32_t, long double>> next;
            for (const auto& [i, val] : frontier)
                for (const auto& [j, d] : gram[i]) next.push_back({j, val * d});
            // merge duplicates to keep the frontier small
            std::sort(next.begin(), next.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            std::vector<std::pair<std::uint32_t, long double>> merged;
            for (const auto& [j, val] : next) {
                if (!merged.empty() && merged.back().first == j)
                    merged.back().second += val;
                else
                    merged.push_back({j, val});
            }
            frontier = std::move(merged);
        }
        for (const auto& [j, val] : frontier) {
            for (const auto& [k2, d] : gram[j])
                if (k2 == start) total += val * d;
        }
    }
    return static_cast<double>(total);
}

// trace((A^T A)^{p/2}) by dense multiplication; the cross-check route.
inline double trace_power_route(const DenseMatrix& a, int p) {
    if (!a.square()) throw std::invalid_argument("trace_power_route expects a square matrix");
    if (p < 2 || p % 2 != 0) throw std::invalid_argument("trace_power_route: p must be even, >= 2");
    DenseMatrix g = multiply(transpose(a), a);
    DenseMatrix acc = g;
    for (int i = 1; i < p / 2; ++i) acc = multiply(acc, g);
    double tr = 0;
    for (std::size_t i = 0; i < acc.n_rows; ++i) tr += acc.at(i, i);
    return tr;
}

// The p = 4 single-pair importance-sampling value:
// <a_i, a_j>^2 * L^2 / (|a_i|^2 |a_j|^2) with L = |A|_F^2.
inline double importance_weight(const SparseVector& row_i, const SparseVector& row_j, double L) {
    double ni = row_i.dot(row_i);
    double nj = row_j.dot(row_j);
    if (ni <= 0 || nj <= 0) throw std::invalid_argument("importance_weight: zero row norm");
    double d = row_i.dot(row_j);
    return d * d * L * L / (ni * nj);
}

}  // namespace specstream
