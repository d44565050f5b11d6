#pragma once

// l2 row sampler over a turnstile matrix stream. Each instance draws its own
// u_1..u_n ~ Unif(0,1), routes every update (i, j, delta) into Count-Sketch
// structures over the n^2 entries of the row-scaled matrix B = diag(1/sqrt(u)) A,
// plus a small second-moment sketch for |B|_F^2. Repetitions share u and
// differ only in sketch randomness.
//
// Sampling reconstructs thresholded row norms |b~_i|^2 and succeeds when a
// repetition sees exactly one row above C' L / eps; the returned row is
// rescaled back by sqrt(u_i). Conditioned on success, the returned index is
// distributed like |a_i|^2 / |A|_F^2 up to (1 +/- eps) factors. Failure is
// an empty optional, not an error.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "specstream/count_sketch.hpp"
#include "specstream/f2_sketch.hpp"
#include "specstream/rng.hpp"

namespace specstream {

enum class RowOrigin { Heavy, Sampled };

struct SampledRow {
    std::uint32_t index = 0;
    std::vector<std::pair<std::uint32_t, double>> entries;  // (col, value), col ascending
    double ell = 0;  // |entries|_2^2
    RowOrigin origin = RowOrigin::Sampled;

    double dot(const SampledRow& other) const {
        double acc = 0;
        std::size_t i = 0, j = 0;
        while (i < entries.size() && j < other.entries.size()) {
            if (entries[i].first < other.entries[j].first) {
                ++i;
            } else if (entries[i].first > other.entries[j].first) {
                ++j;
            } else {
                acc += entries[i].second * other.entries[j].second;
                ++i;
                ++j;
            }
        }
        return acc;
    }
};

struct PrecisionSamplerShape {
    std::size_t width = 64;   // inner Count-Sketch width
    std::size_t rows = 9;     // inner Count-Sketch rows (odd)
    std::size_t reps = 2;     // repetitions sharing u
    std::size_t f2_rows = 3;  // |B|_F^2 sketch shape
    std::size_t f2_width = 16;
};

class PrecisionSampler {
  public:
    PrecisionSampler(std::size_t n, double epsilon, const PrecisionSamplerShape& shape,
                     std::uint64_t seed)
        : PrecisionSampler(n, epsilon, shape, seed, derive_u(n, seed)) {}

    // Test hook: explicit u vector.
    PrecisionSampler(std::size_t n, double epsilon, const PrecisionSamplerShape& shape,
                     std::uint64_t seed, std::vector<double> u)
        : n_(n), epsilon_(epsilon), shape_(shape), seed_(seed), u_(std::move(u)) {
        if (n == 0) throw std::invalid_argument("sampler: empty row universe");
        if (!(epsilon >= 0.01 && epsilon < 1.0 / 3.0))
            throw std::invalid_argument("sampler: epsilon must lie in [0.01, 1/3)");
        if (u_.size() != n_) throw std::invalid_argument("sampler: u vector has wrong length");
        scale_fixed_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (!(u_[i] > 0.0 && u_[i] < 1.0)) throw std::invalid_argument("sampler: u outside (0,1)");
            scale_fixed_[i] = to_fixed_point(1.0 / std::sqrt(u_[i]));
        }
        const std::uint64_t domain = static_cast<std::uint64_t>(n_) * n_;
        sketches_.reserve(shape_.reps);
        for (std::size_t r = 0; r < shape_.reps; ++r)
            sketches_.emplace_back(shape_.rows, shape_.width, domain, derive_seed(seed_, 10, r));
        f2_b_ = ScaledF2Sketch(shape_.f2_rows, shape_.f2_width, domain, derive_seed(seed_, 11));
    }

    std::size_t n() const { return n_; }
    double epsilon() const { return epsilon_; }
    const std::vector<double>& u() const { return u_; }
    std::uint64_t seed() const { return seed_; }
    const PrecisionSamplerShape& shape() const { return shape_; }
    const ScaledCountSketch& repetition(std::size_t r) const { return sketches_.at(r); }
    const ScaledF2Sketch& f2_b() const { return f2_b_; }

    std::size_t cells() const {
        std::size_t c = f2_b_.cells();
        for (const auto& s : sketches_) c += s.cells();
        return c;
    }

    void update(std::size_t row, std::size_t col, std::int64_t delta) {
        if (row >= n_ || col >= n_) throw std::out_of_range("sampler: index out of range");
        const std::uint64_t flat = static_cast<std::uint64_t>(row) * n_ + col;
        const __int128 inc = scaled_update(delta, scale_fixed_[row]);
        for (auto& s : sketches_) s.update(flat, inc);
        f2_b_.update(flat, inc);
    }

    void merge(const PrecisionSampler& other) {
        if (other.n_ != n_ || other.seed_ != seed_)
            throw std::invalid_argument("sampler merge: shape or seed mismatch");
        for (std::size_t r = 0; r < sketches_.size(); ++r) sketches_[r].merge(other.sketches_[r]);
        f2_b_.merge(other.f2_b_);
    }

    bool empty() const {
        if (!f2_b_.all_zero()) return false;
        for (const auto& s : sketches_)
            if (!s.all_zero()) return false;
        return true;
    }

    // Entry estimates below this are treated as sketch noise and zeroed.
    double noise_threshold() const {
        double lb = std::max(f2_b_.estimate(), 0.0);
        return 2.0 * std::sqrt(lb / static_cast<double>(shape_.width));
    }

    // One sampling attempt. L approximates |A|_F^2. candidate_rows, when
    // given, must be a superset of every row that could clear the threshold;
    // it only prunes the reconstruction scan.
    std::optional<SampledRow> sample(double L, double c_prime = 4.0,
                                     std::span<const std::uint32_t> candidate_rows = {}) const {
        if (!(L > 0)) throw std::invalid_argument("sampler: L must be positive");
        const double threshold = c_prime * L / epsilon_;
        const double tau = noise_threshold();

        thread_local std::vector<std::uint32_t> all_rows;
        std::span<const std::uint32_t> rows = candidate_rows;
        if (rows.empty()) {
            all_rows.resize(n_);
            for (std::size_t i = 0; i < n_; ++i) all_rows[i] = static_cast<std::uint32_t>(i);
            rows = all_rows;
        }

        for (const auto& sk : sketches_) {
            std::int64_t winner = -1;
            bool unique = true;
            for (std::uint32_t i : rows) {
                double norm = thresholded_row_norm(sk, i, tau);
                if (norm >= threshold) {
                    if (winner >= 0) {
                        unique = false;
                        break;
                    }
                    winner = i;
                }
            }
            if (winner < 0 || !unique) continue;

            SampledRow out;
            out.index = static_cast<std::uint32_t>(winner);
            out.origin = RowOrigin::Sampled;
            const double root_u = std::sqrt(u_[static_cast<std::size_t>(winner)]);
            const std::uint64_t base = static_cast<std::uint64_t>(winner) * n_;
            double ell = 0;
            for (std::size_t j = 0; j < n_; ++j) {
                double est = sk.query(base + j);
                if (std::abs(est) < tau) continue;
                double v = est * root_u;
                out.entries.push_back({static_cast<std::uint32_t>(j), v});
                ell += v * v;
            }
            out.ell = ell;
            if (ell > 0) return out;
        }
        return std::nullopt;
    }

    void save(std::ostream& out) const {
        io::put_magic(out, "SKPS", 1);
        io::put_u64(out, n_);
        std::uint64_t eps_bits;
        static_assert(sizeof(eps_bits) == sizeof(epsilon_));
        std::memcpy(&eps_bits, &epsilon_, 8);
        io::put_u64(out, eps_bits);
        io::put_u64(out, shape_.width);
        io::put_u64(out, shape_.rows);
        io::put_u64(out, shape_.reps);
        io::put_u64(out, shape_.f2_rows);
        io::put_u64(out, shape_.f2_width);
        io::put_u64(out, seed_);
        for (double v : u_) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, 8);
            io::put_u64(out, bits);
        }
        for (const auto& s : sketches_) s.save(out);
        f2_b_.save(out);
    }

    static PrecisionSampler load(std::istream& in) {
        io::expect_magic(in, "SKPS", 1);
        std::size_t n = io::get_u64(in);
        std::uint64_t eps_bits = io::get_u64(in);
        double eps;
        std::memcpy(&eps, &eps_bits, 8);
        PrecisionSamplerShape shape;
        shape.width = io::get_u64(in);
        shape.rows = io::get_u64(in);
        shape.reps = io::get_u64(in);
        shape.f2_rows = io::get_u64(in);
        shape.f2_width = io::get_u64(in);
        std::uint64_t seed = io::get_u64(in);
        std::vector<double> u(n);
        for (double& v : u) {
            std::uint64_t bits = io::get_u64(in);
            std::memcpy(&v, &bits, 8);
        }
        PrecisionSampler s(n, eps, shape, seed, std::move(u));
        for (auto& sk : s.sketches_) sk = ScaledCountSketch::load(in);
        s.f2_b_ = ScaledF2Sketch::load(in);
        return s;
    }

    bool operator==(const PrecisionSampler& other) const {
        return n_ == other.n_ && seed_ == other.seed_ && u_ == other.u_ &&
               sketches_ == other.sketches_ && f2_b_ == other.f2_b_;
    }

  private:
    static std::vector<double> derive_u(std::size_t n, std::uint64_t seed) {
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v = unit_double(derive_seed(seed, 12, i));
            u[i] = std::max(v, 0x1.0p-40);  // keep 1/sqrt(u) inside fixed-point range
        }
        return u;
    }

    double thresholded_row_norm(const ScaledCountSketch& sk, std::uint32_t row,
                                double tau) const {
        const std::uint64_t base = static_cast<std::uint64_t>(row) * n_;
        double acc = 0;
        for (std::size_t j = 0; j < n_; ++j) {
            double est = sk.query(base + j);
            if (std::abs(est) >= tau) acc += est * est;
        }
        return acc;
    }

    std::size_t n_ = 0;
    double epsilon_ = 0.1;
    PrecisionSamplerShape shape_;
    std::uint64_t seed_ = 0;
    std::vector<double> u_;
    std::vector<std::int64_t> scale_fixed_;
    std::vector<ScaledCountSketch> sketches_;
    ScaledF2Sketch f2_b_;
};

}  // namespace specstream
