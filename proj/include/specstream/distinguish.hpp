#pragma once

// End-to-end separation experiments: sample hard instances for both promise
// cases, evaluate a block-additive spectral function exactly through the
// block descriptors, and report whether the two value distributions land in
// disjoint ranges around their predicted means.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "specstream/bhh.hpp"
#include "specstream/blocks.hpp"
#include "specstream/gap.hpp"
#include "specstream/spectral_function.hpp"

namespace specstream {

struct CaseStats {
    std::vector<double> values;
    double mean = 0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();

    void add(double v) {
        values.push_back(v);
        min = std::min(min, v);
        max = std::max(max, v);
    }
    void finish() {
        double s = 0;
        for (double v : values) s += v;
        mean = values.empty() ? 0 : s / static_cast<double>(values.size());
    }
};

struct SeparationReport {
    GapReport gap;
    std::size_t n = 0;
    std::size_t trials = 0;
    CaseStats even_case;
    CaseStats odd_case;
    double theoretical_even = 0;  // (n/2t) * A, A = 2 E_{even}[f(block)]
    double theoretical_odd = 0;
    bool disjoint = false;
    double margin = 0;  // gap between the two value ranges (signed)

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["gap_report"] = gap.to_json();
        j["n"] = n;
        j["trials"] = trials;
        j["even"] = {{"mean", even_case.mean}, {"min", even_case.min}, {"max", even_case.max}};
        j["odd"] = {{"mean", odd_case.mean}, {"min", odd_case.min}, {"max", odd_case.max}};
        j["theoretical_even"] = theoretical_even;
        j["theoretical_odd"] = theoretical_odd;
        j["disjoint"] = disjoint;
        j["margin"] = margin;
        return j;
    }
};

// Exact f-value of the materialized instance, from its block descriptors
// and the cached per-tentacle-count block values.
inline double instance_value(const BhhInstance& inst, const std::vector<double>& per_k_cache) {
    double acc = 0;
    for (std::size_t e = 0; e < inst.matching.size(); ++e)
        acc += per_k_cache[std::size_t(inst.edge_weight(e))];
    return acc;
}

inline SeparationReport distinguish_experiment(const SpectralFunction& f, int t, int m,
                                               double gamma, std::size_t n,
                                               std::size_t trials, std::uint64_t seed,
                                               BlockKind kind = BlockKind::Asymmetric,
                                               double tolerance = 1e-10) {
    SeparationReport rep;
    rep.gap = gap_expectation(f, t, m, gamma, kind, tolerance);
    if (rep.gap.verdict != GapVerdict::NonZero)
        throw std::invalid_argument("distinguish: the gap for this configuration is zero");
    rep.n = n;
    rep.trials = trials;

    std::vector<double> per_k(std::size_t(t) + 1);
    for (int k = 0; k <= t; ++k)
        per_k[std::size_t(k)] = rep.gap.per_k.at(k);

    const double groups = static_cast<double>(n) / (2.0 * t);
    rep.theoretical_even = groups * 2.0 * rep.gap.even_expectation;
    rep.theoretical_odd = groups * 2.0 * rep.gap.odd_expectation;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        auto even_inst = sample_instance(t, n, PromiseCase::AllZero, derive_seed(seed, 40, trial));
        auto odd_inst = sample_instance(t, n, PromiseCase::AllOne, derive_seed(seed, 41, trial));
        rep.even_case.add(instance_value(even_inst, per_k));
        rep.odd_case.add(instance_value(odd_inst, per_k));
    }
    rep.even_case.finish();
    rep.odd_case.finish();

    if (rep.even_case.min > rep.odd_case.max)
        rep.margin = rep.even_case.min - rep.odd_case.max;
    else if (rep.odd_case.min > rep.even_case.max)
        rep.margin = rep.odd_case.min - rep.even_case.max;
    else
        rep.margin = -std::min(rep.even_case.max - rep.odd_case.min,
                               rep.odd_case.max - rep.even_case.min);
    rep.disjoint = rep.margin > 0;
    return rep;
}

// Top-k separation: with m = t chosen as the largest integer such that
// 1/(t 2^t) >= alpha, the even case plants a Theta(N / (m 2^m)) excess of
// full-tentacle blocks, and the sum of the k largest singular values
// separates for k <= alpha N.
struct KyFanSeparation {
    int t = 2;
    std::size_t k = 0;
    double even_mean = 0;
    double odd_mean = 0;
    double even_min = std::numeric_limits<double>::infinity();
    double odd_max = -std::numeric_limits<double>::infinity();
    double mean_full_blocks_even = 0;  // blocks with q = m, even case
    double mean_full_blocks_odd = 0;
    bool separated = false;
};

inline KyFanSeparation ky_fan_separation(double alpha, std::size_t n, std::size_t trials,
                                         std::uint64_t seed) {
    if (!(alpha > 0) || alpha >= 0.5) throw std::invalid_argument("ky_fan: alpha in (0, 1/2)");
    int t = 2;  // largest even t with 1/(t 2^t) >= alpha
    while (1.0 / ((t + 2) * std::pow(2.0, t + 2)) >= alpha) t += 2;
    const int m = t;

    KyFanSeparation out;
    out.t = t;

    // top singular value per block, by tentacle count
    std::vector<std::vector<double>> spectra(std::size_t(t) + 1);
    for (int q = 0; q <= t; ++q) {
        BlockParams bp{m, q, 1.0, BlockKind::SymmetricEvenP};
        spectra[std::size_t(q)] = spectrum_symmetric(bp).values;
    }

    const std::size_t N = (n / std::size_t(t)) * std::size_t(m);  // symmetric blocks are m x m
    out.k = static_cast<std::size_t>(alpha * static_cast<double>(N));
    if (out.k == 0) throw std::invalid_argument("ky_fan: alpha N too small");

    double even_acc = 0, odd_acc = 0, even_full = 0, odd_full = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        for (auto promise : {PromiseCase::AllZero, PromiseCase::AllOne}) {
            auto inst = sample_instance(t, n, promise,
                                        derive_seed(seed, promise == PromiseCase::AllZero ? 42 : 43,
                                                    trial));
            std::vector<double> all;
            std::size_t full = 0;
            for (std::size_t e = 0; e < inst.matching.size(); ++e) {
                int q = inst.edge_weight(e);
                if (q == m) ++full;
                const auto& vals = spectra[std::size_t(q)];
                all.insert(all.end(), vals.begin(), vals.end());
            }
            std::nth_element(all.begin(), all.begin() + std::ptrdiff_t(out.k), all.end(),
                             std::greater<double>());
            double fk = 0;
            for (std::size_t i = 0; i < out.k; ++i) fk += all[i];
            if (promise == PromiseCase::AllZero) {
                even_acc += fk;
                even_full += static_cast<double>(full);
                out.even_min = std::min(out.even_min, fk);
            } else {
                odd_acc += fk;
                odd_full += static_cast<double>(full);
                out.odd_max = std::max(out.odd_max, fk);
            }
        }
    }
    const double tr = static_cast<double>(trials);
    out.even_mean = even_acc / tr;
    out.odd_mean = odd_acc / tr;
    out.mean_full_blocks_even = even_full / tr;
    out.mean_full_blocks_odd = odd_full / tr;
    out.separated = out.even_min > out.odd_max;
    return out;
}

}  // namespace specstream
