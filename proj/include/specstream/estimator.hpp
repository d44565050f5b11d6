#pragma once

// Turnstile estimator for |A|_p^p, even p >= 4, for sparse matrices.
//
// State fanned out per update: a second-moment sketch for L ~ |A|_F^2, one
// heavy-row Count-Sketch per tuple slot s in [p/2], and a bank of precision
// samplers per slot. At finalize, slot s collects K_s (rows whose
// reconstructed norm clears L/(10T), largest first, capped at 10T) plus the
// rows its samplers return; the estimate is the cyclic-product sum over
// I_1 x ... x I_q with importance weights L/ell and 1/T per sampled slot.
//
// Desk-scale notes, both config-overridable:
//  * sampler_cap bounds the number of live samplers per slot; the full
//    T-bank is linear-memory-correct but its fan-out cost is prohibitive
//    and sampled rows are weighted by the live count, which keeps the
//    accounting consistent.
//  * finalize prunes each sampler's reconstruction scan to rows whose u_i
//    could possibly clear the threshold given the slot's reconstructed
//    norms (plus slack); the scan is otherwise O(n^2) per repetition.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specstream/count_sketch.hpp"
#include "specstream/f2_sketch.hpp"
#include "specstream/precision_sampler.hpp"
#include "specstream/rng.hpp"

namespace specstream {

struct EstimatorConfig {
    std::size_t n = 0;
    int p = 4;
    double epsilon = 0.25;
    std::uint64_t seed = 1;

    // heading constants; Theta(.) shapes follow the sparse-matrix analysis
    double c_T = 4.0;        // T = ceil(c_T n^{1-2/p} / eps^2)
    double c_R = 0.25;       // sampler repetitions = ceil(c_R log2 n)
    double c_w = 8.0;        // sampler width = ceil(c_w (log2(n)/eps + 1/eps^2))
    double c_ws = 64.0;      // heavy width = ceil(c_ws T / eps)
    double c_prime = 4.0;    // heavy-row threshold constant in sampling
    std::size_t sampler_cap = 64;

    void validate() const {
        if (n < 2) throw std::invalid_argument("estimator: n must be >= 2");
        if (p < 4 || p % 2 != 0)
            throw std::invalid_argument("estimator: p must be an even integer >= 4");
        if (!(epsilon >= 0.01 && epsilon < 1.0 / 3.0))
            throw std::invalid_argument("estimator: epsilon must lie in [0.01, 1/3)");
    }

    int q() const { return p / 2; }
    double log2n() const { return std::log2(static_cast<double>(n)); }

    std::size_t T() const {
        double t = c_T * std::pow(static_cast<double>(n), 1.0 - 2.0 / p) / (epsilon * epsilon);
        return static_cast<std::size_t>(std::ceil(t));
    }
    std::size_t samplers_per_slot() const { return std::min(T(), sampler_cap); }
    std::size_t sampler_reps() const {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c_R * log2n())));
    }
    std::size_t sampler_width() const {
        return static_cast<std::size_t>(std::ceil(c_w * (log2n() / epsilon + 1.0 / (epsilon * epsilon))));
    }
    std::size_t sampler_rows() const {
        auto r = static_cast<std::size_t>(std::ceil(log2n()));
        return r | 1;  // odd for the median
    }
    std::size_t heavy_width() const {
        return static_cast<std::size_t>(std::ceil(c_ws * static_cast<double>(T()) / epsilon));
    }
    std::size_t heavy_rows() const {
        auto r = std::max<std::size_t>(5, static_cast<std::size_t>(std::ceil(log2n() / 2.0)));
        return r | 1;
    }
    std::size_t f2_cells() const {
        return 7 * static_cast<std::size_t>(std::ceil(12.0 / (epsilon * epsilon)));
    }
    PrecisionSamplerShape sampler_shape() const {
        PrecisionSamplerShape s;
        s.width = sampler_width();
        s.rows = sampler_rows();
        s.reps = sampler_reps();
        s.f2_rows = 3;
        s.f2_width = 16;
        return s;
    }

    // Closed-form accumulator count; the measured state must match exactly.
    std::size_t accounted_accumulators() const {
        const PrecisionSamplerShape s = sampler_shape();
        std::size_t per_sampler = s.reps * s.rows * s.width + s.f2_rows * s.f2_width;
        return f2_cells() + std::size_t(q()) * heavy_rows() * heavy_width() +
               std::size_t(q()) * samplers_per_slot() * per_sampler;
    }
};

struct MemoryReport {
    std::size_t accumulators = 0;  // sketch cells
    std::size_t bytes = 0;         // cells plus per-sampler u/scale storage
};

struct EstimatorResult {
    double y = 0;
    double l_estimate = 0;
    std::vector<std::pair<int, int>> failed_slots;   // (s, t) with no sample
    std::size_t discarded_samples = 0;               // samples already heavy
    std::vector<std::size_t> heavy_counts;           // |K_s| per slot
    std::size_t tuples_visited = 0;                  // chain-DFS nodes
    MemoryReport memory;
};

class SchattenEstimator {
  public:
    explicit SchattenEstimator(const EstimatorConfig& config) : cfg_(config) {
        cfg_.validate();
        const std::uint64_t domain = static_cast<std::uint64_t>(cfg_.n) * cfg_.n;
        f2_ = F2Sketch::for_epsilon(cfg_.epsilon, domain, derive_seed(cfg_.seed, 20));
        for (int s = 0; s < cfg_.q(); ++s)
            heavy_.emplace_back(cfg_.heavy_rows(), cfg_.heavy_width(), domain,
                                derive_seed(cfg_.seed, 21, std::uint64_t(s)));
        const auto shape = cfg_.sampler_shape();
        samplers_.resize(std::size_t(cfg_.q()));
        for (int s = 0; s < cfg_.q(); ++s) {
            samplers_[std::size_t(s)].reserve(cfg_.samplers_per_slot());
            for (std::size_t t = 0; t < cfg_.samplers_per_slot(); ++t) {
                std::uint64_t seed =
                    derive_seed(cfg_.seed, 22, (std::uint64_t(s) << 32) | t);
                samplers_[std::size_t(s)].emplace_back(cfg_.n, cfg_.epsilon, shape, seed);
            }
        }
    }

    const EstimatorConfig& config() const { return cfg_; }
    std::size_t update_count() const { return updates_; }

    void ingest(std::size_t i, std::size_t j, std::int64_t delta) {
        if (i >= cfg_.n || j >= cfg_.n) throw std::out_of_range("estimator: index out of range");
        const std::uint64_t flat = static_cast<std::uint64_t>(i) * cfg_.n + j;
        f2_.update(flat, delta);
        for (auto& h : heavy_) h.update(flat, delta);
        for (auto& bank : samplers_)
            for (auto& ps : bank) ps.update(i, j, delta);
        ++updates_;
    }

    // Shard-parallel ingest: states built from the same config merge cellwise.
    void merge(const SchattenEstimator& other) {
        if (other.cfg_.n != cfg_.n || other.cfg_.seed != cfg_.seed || other.cfg_.p != cfg_.p)
            throw std::invalid_argument("estimator merge: config mismatch");
        f2_.merge(other.f2_);
        for (std::size_t s = 0; s < heavy_.size(); ++s) heavy_[s].merge(other.heavy_[s]);
        for (std::size_t s = 0; s < samplers_.size(); ++s)
            for (std::size_t t = 0; t < samplers_[s].size(); ++t)
                samplers_[s][t].merge(other.samplers_[s][t]);
        updates_ += other.updates_;
    }

    MemoryReport memory_report() const {
        MemoryReport m;
        m.accumulators = f2_.cells();
        std::size_t bytes = f2_.cells() * 8;
        for (const auto& h : heavy_) {
            m.accumulators += h.cells();
            bytes += h.cells() * 8;
        }
        for (const auto& bank : samplers_)
            for (const auto& ps : bank) {
                m.accumulators += ps.cells();
                bytes += ps.cells() * 16;   // fixed-point cells are 128-bit
                bytes += ps.n() * 16;       // u and quantized scales
            }
        m.bytes = bytes;
        return m;
    }

    // Read-only; calling twice returns the same result.
    EstimatorResult finalize() const {
        if (updates_ == 0) throw std::logic_error("estimator: finalize before any update");
        EstimatorResult out;
        out.memory = memory_report();
        const double L = std::max(f2_.estimate(), 0.0);
        out.l_estimate = L;
        if (L <= 0) return out;  // net-zero stream: |A|_p^p = 0

        const std::size_t q = std::size_t(cfg_.q());
        const double T_full = static_cast<double>(cfg_.T());
        const double heavy_threshold = L / (10.0 * T_full);
        const std::size_t heavy_cap = static_cast<std::size_t>(10.0 * T_full);
        const double tau_heavy =
            2.0 * std::sqrt(L / static_cast<double>(cfg_.heavy_width()));

        std::vector<std::vector<SampledRow>> members(q);
        for (std::size_t s = 0; s < q; ++s) {
            std::vector<double> norms = reconstruct_norms(heavy_[s], tau_heavy);

            std::vector<std::uint32_t> heavy_rows;
            for (std::uint32_t i = 0; i < cfg_.n; ++i)
                if (norms[i] >= heavy_threshold) heavy_rows.push_back(i);
            std::sort(heavy_rows.begin(), heavy_rows.end(), [&](std::uint32_t a, std::uint32_t b) {
                if (norms[a] != norms[b]) return norms[a] > norms[b];
                return a < b;
            });
            if (heavy_rows.size() > heavy_cap) heavy_rows.resize(heavy_cap);
            out.heavy_counts.push_back(heavy_rows.size());

            std::vector<char> in_k(cfg_.n, 0);
            for (std::uint32_t i : heavy_rows) in_k[i] = 1;

            for (std::uint32_t i : heavy_rows)
                members[s].push_back(materialize_row(heavy_[s], i, tau_heavy, norms[i]));

            // sampler bank for this slot
            const auto& bank = samplers_[s];
            for (std::size_t t = 0; t < bank.size(); ++t) {
                auto cands = sampler_candidates(bank[t], norms, L);
                auto got = bank[t].sample(L, cfg_.c_prime, cands);
                if (!got) {
                    out.failed_slots.push_back({int(s), int(t)});
                    continue;
                }
                if (in_k[got->index]) {
                    ++out.discarded_samples;  // already covered by K_s
                    continue;
                }
                members[s].push_back(std::move(*got));
            }
            std::stable_sort(members[s].begin(), members[s].end(),
                             [](const SampledRow& a, const SampledRow& b) {
                                 if (a.index != b.index) return a.index < b.index;
                                 return a.origin == RowOrigin::Heavy && b.origin == RowOrigin::Sampled;
                             });
        }

        out.y = cyclic_sum(members, L, out.tuples_visited);
        return out;
    }

  private:
    std::vector<double> reconstruct_norms(const CountSketch& sk, double tau) const {
        std::vector<double> norms(cfg_.n, 0.0);
        for (std::size_t i = 0; i < cfg_.n; ++i) {
            const std::uint64_t base = static_cast<std::uint64_t>(i) * cfg_.n;
            double acc = 0;
            for (std::size_t j = 0; j < cfg_.n; ++j) {
                double est = sk.query(base + j);
                if (std::abs(est) >= tau) acc += est * est;
            }
            norms[i] = acc;
        }
        return norms;
    }

    SampledRow materialize_row(const CountSketch& sk, std::uint32_t i, double tau,
                               double norm) const {
        SampledRow r;
        r.index = i;
        r.origin = RowOrigin::Heavy;
        r.ell = norm;
        const std::uint64_t base = static_cast<std::uint64_t>(i) * cfg_.n;
        for (std::size_t j = 0; j < cfg_.n; ++j) {
            double est = sk.query(base + j);
            if (std::abs(est) >= tau) r.entries.push_back({static_cast<std::uint32_t>(j), est});
        }
        return r;
    }

    // Rows whose u_i could let them clear c' L / eps, judged from the slot's
    // reconstructed norms with additive slack for unreconstructed mass.
    std::vector<std::uint32_t> sampler_candidates(const PrecisionSampler& ps,
                                                  const std::vector<double>& norms,
                                                  double L) const {
        std::vector<std::uint32_t> cands;
        const auto& u = ps.u();
        const double scale = cfg_.epsilon / (cfg_.c_prime * L);
        for (std::uint32_t i = 0; i < cfg_.n; ++i) {
            double cap = (2.0 * norms[i] + L / 64.0) * scale;
            if (u[i] <= cap) cands.push_back(i);
        }
        return cands;
    }

    double cyclic_sum(const std::vector<std::vector<SampledRow>>& members, double L,
                      std::size_t& visited) const {
        const std::size_t q = members.size();
        // col -> member ids, per slot
        std::vector<std::map<std::uint32_t, std::vector<std::uint32_t>>> index(q);
        for (std::size_t s = 0; s < q; ++s)
            for (std::uint32_t id = 0; id < members[s].size(); ++id)
                for (const auto& [c, v] : members[s][id].entries) index[s][c].push_back(id);

        auto member_weight = [&](const SampledRow& r) {
            if (r.origin == RowOrigin::Heavy) return 1.0;
            return L / (r.ell * static_cast<double>(cfg_.samplers_per_slot()));
        };

        long double total = 0;
        std::vector<std::uint32_t> neighbor_buf;
        std::vector<std::uint32_t> stamp;
        // chains anchored at each member of slot 0
        struct Frame {
            std::uint32_t id;
            double partial;
        };
        std::vector<std::vector<Frame>> levels(q);
        for (std::uint32_t a = 0; a < members[0].size(); ++a) {
            const SampledRow& first = members[0][a];
            levels[0] = {{a, member_weight(first)}};
            for (std::size_t s = 1; s < q; ++s) {
                levels[s].clear();
                for (const Frame& f : levels[s - 1]) {
                    const SampledRow& cur = members[s - 1][f.id];
                    neighbor_buf.clear();
                    stamp.assign(members[s].size(), 0);
                    for (const auto& [c, v] : cur.entries) {
                        auto it = index[s].find(c);
                        if (it == index[s].end()) continue;
                        for (std::uint32_t id : it->second) {
                            if (stamp[id]) continue;
                            stamp[id] = 1;
                            neighbor_buf.push_back(id);
                        }
                    }
                    std::sort(neighbor_buf.begin(), neighbor_buf.end());
                    for (std::uint32_t id : neighbor_buf) {
                        ++visited;
                        double d = cur.dot(members[s][id]);
                        if (d == 0.0) continue;
                        levels[s].push_back({id, f.partial * d * member_weight(members[s][id])});
                    }
                }
            }
            // close the cycle back to the anchor
            for (const Frame& f : levels[q - 1]) {
                ++visited;
                total += static_cast<long double>(f.partial) * members[q - 1][f.id].dot(first);
            }
        }
        return static_cast<double>(total);
    }

    EstimatorConfig cfg_;
    std::size_t updates_ = 0;
    F2Sketch f2_;
    std::vector<CountSketch> heavy_;
    std::vector<std::vector<PrecisionSampler>> samplers_;
};

}  // namespace specstream
