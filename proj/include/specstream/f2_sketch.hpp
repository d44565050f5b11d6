#pragma once

// Second-moment (F2) sketch, bucketed AMS style: each of R independent rows
// hashes every update into one of W buckets with a 4-wise sign; a row
// estimates F2 by its sum of squared buckets (unbiased, variance
// <= 2 F2^2 / W), and the sketch reports the median over rows. int64
// counters for integer streams, fixed-point int128 for scaled streams.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "specstream/count_sketch.hpp"
#include "specstream/hashing.hpp"
#include "specstream/sketch_io.hpp"

namespace specstream {

template <typename Acc>
class BasicF2Sketch {
  public:
    BasicF2Sketch() = default;

    BasicF2Sketch(std::size_t rows, std::size_t width, std::uint64_t domain, std::uint64_t seed)
        : rows_(rows), width_(width), domain_(domain), seed_(seed),
          counters_(rows * width, Acc{0}) {
        if (rows == 0 || rows % 2 == 0) throw std::invalid_argument("f2 rows must be odd");
        if (width == 0) throw std::invalid_argument("f2 width must be positive");
        bucket_.resize(rows_);
        sign_.resize(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            bucket_[r] = BucketHash(derive_seed(seed_, 4, r), width_);
            sign_[r] = SignHash(derive_seed(seed_, 5, r));
        }
    }

    // Width for a (1 +/- eps) estimate with constant failure probability.
    static BasicF2Sketch for_epsilon(double eps, std::uint64_t domain, std::uint64_t seed) {
        if (!(eps > 0) || eps >= 1) throw std::invalid_argument("f2 epsilon must be in (0,1)");
        std::size_t width = static_cast<std::size_t>(std::ceil(12.0 / (eps * eps)));
        return BasicF2Sketch(7, width, domain, seed);
    }

    std::size_t cells() const { return counters_.size(); }
    std::size_t rows() const { return rows_; }
    std::size_t width() const { return width_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t domain() const { return domain_; }

    void update(std::uint64_t index, Acc delta) {
        if (index >= domain_) throw std::out_of_range("f2 index out of domain");
        for (std::size_t r = 0; r < rows_; ++r) {
            std::size_t b = bucket_[r](index);
            counters_[r * width_ + b] += Acc(sign_[r](index)) * delta;
        }
    }

    double estimate() const {
        std::vector<double> rows(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            double acc = 0;
            for (std::size_t i = 0; i < width_; ++i) {
                double v = to_double(counters_[r * width_ + i]);
                acc += v * v;
            }
            rows[r] = acc;
        }
        auto mid = rows.begin() + static_cast<std::ptrdiff_t>(rows.size() / 2);
        std::nth_element(rows.begin(), mid, rows.end());
        return *mid;
    }

    bool all_zero() const {
        for (const Acc& v : counters_)
            if (v != Acc{0}) return false;
        return true;
    }

    void merge(const BasicF2Sketch& other) {
        if (other.rows_ != rows_ || other.width_ != width_ || other.domain_ != domain_ ||
            other.seed_ != seed_)
            throw std::invalid_argument("f2 merge: shape or seed mismatch");
        for (std::size_t i = 0; i < counters_.size(); ++i) counters_[i] += other.counters_[i];
    }

    void save(std::ostream& out) const {
        io::put_magic(out, "SKF2", 1);
        io::put_u64(out, rows_);
        io::put_u64(out, width_);
        io::put_u64(out, domain_);
        io::put_u64(out, seed_);
        for (const Acc& v : counters_) put_acc(out, v);
    }

    static BasicF2Sketch load(std::istream& in) {
        io::expect_magic(in, "SKF2", 1);
        std::size_t rows = io::get_u64(in);
        std::size_t width = io::get_u64(in);
        std::uint64_t domain = io::get_u64(in);
        std::uint64_t seed = io::get_u64(in);
        BasicF2Sketch s(rows, width, domain, seed);
        for (Acc& v : s.counters_) v = get_acc(in);
        return s;
    }

    bool operator==(const BasicF2Sketch& other) const {
        return rows_ == other.rows_ && width_ == other.width_ && domain_ == other.domain_ &&
               seed_ == other.seed_ && counters_ == other.counters_;
    }

  private:
    static double to_double(std::int64_t v) { return static_cast<double>(v); }
    static double to_double(__int128 v) {
        return static_cast<double>(static_cast<long double>(v) / kFixedPointScale);
    }
    static void put_acc(std::ostream& out, std::int64_t v) { io::put_i64(out, v); }
    static void put_acc(std::ostream& out, __int128 v) { io::put_i128(out, v); }
    static Acc get_acc(std::istream& in) {
        if constexpr (sizeof(Acc) == 8)
            return io::get_i64(in);
        else
            return io::get_i128(in);
    }

    std::size_t rows_ = 0;
    std::size_t width_ = 0;
    std::uint64_t domain_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<Acc> counters_;
    std::vector<BucketHash> bucket_;
    std::vector<SignHash> sign_;
};

using F2Sketch = BasicF2Sketch<std::int64_t>;
using ScaledF2Sketch = BasicF2Sketch<__int128>;

}  // namespace specstream
