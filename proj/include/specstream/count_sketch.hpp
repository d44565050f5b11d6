#pragma once

// Count-Sketch over an index universe: R independent rows, each a pairwise-
// independent bucket hash and a 4-wise independent sign hash over width W.
// A point query returns the median over rows of sign * bucket.
//
// Two accumulator flavors share the implementation:
//   * CountSketch       - int64 cells for integer update streams; state is
//                         exactly linear, so any update order and any
//                         shard-merge gives bit-identical tables.
//   * ScaledCountSketch - int128 cells in 2^-24 fixed point, for streams
//                         whose updates carry a per-row real scale. The
//                         scale is quantized to the same grid, so linearity
//                         and order-independence stay exact.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "specstream/hashing.hpp"
#include "specstream/sketch_io.hpp"

namespace specstream {

constexpr int kFixedPointBits = 24;
constexpr double kFixedPointScale = double(std::int64_t(1) << kFixedPointBits);

template <typename Acc>
class BasicCountSketch {
  public:
    BasicCountSketch() = default;

    BasicCountSketch(std::size_t rows, std::size_t width, std::uint64_t domain,
                     std::uint64_t seed)
        : rows_(rows), width_(width), domain_(domain), seed_(seed),
          table_(rows * width, Acc{0}) {
        if (rows == 0 || rows % 2 == 0) throw std::invalid_argument("count-sketch rows must be odd");
        if (width == 0) throw std::invalid_argument("count-sketch width must be positive");
        init_hashes();
    }

    std::size_t rows() const { return rows_; }
    std::size_t width() const { return width_; }
    std::uint64_t domain() const { return domain_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t cells() const { return table_.size(); }

    void update(std::uint64_t index, Acc delta) {
        check_index(index);
        for (std::size_t r = 0; r < rows_; ++r) {
            std::size_t b = bucket_[r](index);
            table_[r * width_ + b] += Acc(sign_[r](index)) * delta;
        }
    }

    // Median over rows of sign * bucket, converted to double.
    double query(std::uint64_t index) const {
        check_index(index);
        thread_local std::vector<double> vals;
        vals.clear();
        for (std::size_t r = 0; r < rows_; ++r) {
            std::size_t b = bucket_[r](index);
            vals.push_back(to_double(table_[r * width_ + b]) * sign_[r](index));
        }
        auto mid = vals.begin() + static_cast<std::ptrdiff_t>(vals.size() / 2);
        std::nth_element(vals.begin(), mid, vals.end());
        return *mid;
    }

    bool all_zero() const {
        for (const Acc& v : table_)
            if (v != Acc{0}) return false;
        return true;
    }

    void merge(const BasicCountSketch& other) {
        if (other.rows_ != rows_ || other.width_ != width_ || other.domain_ != domain_ ||
            other.seed_ != seed_)
            throw std::invalid_argument("count-sketch merge: shape or seed mismatch");
        for (std::size_t i = 0; i < table_.size(); ++i) table_[i] += other.table_[i];
    }

    void save(std::ostream& out) const {
        io::put_magic(out, "SKCS", 1);
        io::put_u64(out, rows_);
        io::put_u64(out, width_);
        io::put_u64(out, domain_);
        io::put_u64(out, seed_);
        for (const Acc& v : table_) put_acc(out, v);
    }

    static BasicCountSketch load(std::istream& in) {
        io::expect_magic(in, "SKCS", 1);
        std::size_t rows = io::get_u64(in);
        std::size_t width = io::get_u64(in);
        std::uint64_t domain = io::get_u64(in);
        std::uint64_t seed = io::get_u64(in);
        BasicCountSketch s(rows, width, domain, seed);
        for (Acc& v : s.table_) v = get_acc(in);
        return s;
    }

    bool operator==(const BasicCountSketch& other) const {
        return rows_ == other.rows_ && width_ == other.width_ && domain_ == other.domain_ &&
               seed_ == other.seed_ && table_ == other.table_;
    }

  private:
    void init_hashes() {
        bucket_.resize(rows_);
        sign_.resize(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            bucket_[r] = BucketHash(derive_seed(seed_, 1, r), width_);
            sign_[r] = SignHash(derive_seed(seed_, 2, r));
        }
    }

    void check_index(std::uint64_t index) const {
        if (index >= domain_) throw std::out_of_range("count-sketch index out of domain");
    }

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
    std::vector<Acc> table_;
    std::vector<BucketHash> bucket_;
    std::vector<SignHash> sign_;
};

using CountSketch = BasicCountSketch<std::int64_t>;
using ScaledCountSketch = BasicCountSketch<__int128>;

// delta * scale as a fixed-point table increment.
inline __int128 scaled_update(std::int64_t delta, std::int64_t scale_fixed) {
    return static_cast<__int128>(delta) * scale_fixed;
}

inline std::int64_t to_fixed_point(double scale) {
    return static_cast<std::int64_t>(std::llround(scale * kFixedPointScale));
}

}  // namespace specstream
