#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace specstream {

// Multiset of singular values, sorted descending, with zeros stored
// explicitly up to the ambient dimension so rank and top-k sums stay
// well defined.
struct Spectrum {
    std::size_t dim = 0;
    std::vector<double> values;  // nonincreasing, nonnegative, size == dim

    Spectrum() = default;

    Spectrum(std::vector<double> vals, std::size_t ambient_dim) : dim(ambient_dim) {
        if (vals.size() > ambient_dim) throw std::invalid_argument("more values than dim");
        for (double v : vals) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("singular values must be finite and nonnegative");
        }
        values = std::move(vals);
        values.resize(ambient_dim, 0.0);
        std::sort(values.begin(), values.end(), std::greater<double>());
    }

    double frobenius_sq() const {
        double s = 0;
        for (double v : values) s += v * v;
        return s;
    }

    std::size_t rank(double tol = 0.0) const {
        std::size_t r = 0;
        for (double v : values)
            if (v > tol) ++r;
        return r;
    }
};

// Multiset union of spectra; ambient dimensions add.
inline Spectrum concat(const Spectrum& a, const Spectrum& b) {
    std::vector<double> vals = a.values;
    vals.insert(vals.end(), b.values.begin(), b.values.end());
    return Spectrum(std::move(vals), a.dim + b.dim);
}

}  // namespace specstream
