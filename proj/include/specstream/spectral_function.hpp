#pragma once

// Functions evaluated on spectra: Schatten powers, SVD entropies, Ky-Fan
// sums, optimal eigenvalue shrinkers, and robust-loss (M-estimator) sums.

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "specstream/spectrum.hpp"

namespace specstream {

enum class MEstimatorKind { L1L2, GemanMcClure, Fair, Welsch, Huber, Tukey, Cauchy };

inline const char* m_estimator_name(MEstimatorKind k) {
    switch (k) {
        case MEstimatorKind::L1L2: return "l1l2";
        case MEstimatorKind::GemanMcClure: return "geman_mcclure";
        case MEstimatorKind::Fair: return "fair";
        case MEstimatorKind::Welsch: return "welsch";
        case MEstimatorKind::Huber: return "huber";
        case MEstimatorKind::Tukey: return "tukey";
        case MEstimatorKind::Cauchy: return "cauchy";
    }
    return "?";
}

class SpectralFunction {
  public:
    enum class Kind {
        Power,       // sum sigma^p, 0^p := 0
        EntropyH,    // sum h(sigma/|s|_2), h(x) = x^2 ln x^2, h(0) := 0
        EntropyHRaw, // sum sigma^2 ln sigma^2 (unnormalized; block-additive)
        Shannon,     // -sum (sigma^2/F2) ln(sigma^2/F2)
        KyFan,       // sum of inner(sigma_i) over the k largest
        Shrinker,    // sum eta_v(sigma_i), v in {1,2,3}
        MEstimator,  // sum rho(sigma_i)
    };

    static SpectralFunction power(double p) {
        if (!(p > 0)) throw std::invalid_argument("power exponent must be positive");
        SpectralFunction f(Kind::Power);
        f.p_ = p;
        return f;
    }
    static SpectralFunction identity() { return power(1.0); }
    static SpectralFunction entropy_h() { return SpectralFunction(Kind::EntropyH); }
    static SpectralFunction entropy_h_raw() { return SpectralFunction(Kind::EntropyHRaw); }
    static SpectralFunction shannon_entropy() { return SpectralFunction(Kind::Shannon); }

    static SpectralFunction ky_fan(int k, const SpectralFunction& inner = identity()) {
        if (k < 1) throw std::invalid_argument("ky-fan k must be >= 1");
        SpectralFunction f(Kind::KyFan);
        f.k_ = k;
        f.inner_ = std::make_shared<SpectralFunction>(inner);
        return f;
    }

    static SpectralFunction shrinker(int variant, double alpha) {
        if (variant < 1 || variant > 3) throw std::invalid_argument("shrinker variant is 1, 2 or 3");
        if (!(alpha > 0)) throw std::invalid_argument("shrinker alpha must be positive");
        SpectralFunction f(Kind::Shrinker);
        f.variant_ = variant;
        f.alpha_ = alpha;
        return f;
    }

    static SpectralFunction m_estimator(MEstimatorKind which, double scale = 1.0) {
        if (!(scale > 0)) throw std::invalid_argument("m-estimator scale must be positive");
        SpectralFunction f(Kind::MEstimator);
        f.m_kind_ = which;
        f.scale_ = scale;
        return f;
    }

    Kind kind() const { return kind_; }
    double power_exponent() const { return p_; }
    int ky_fan_k() const { return k_; }

    // True when f(diag(X1..Xs)) = sum f(Xi); these are the functions the
    // parity-gap machinery accepts.
    bool block_additive() const {
        switch (kind_) {
            case Kind::Power:
            case Kind::EntropyHRaw:
            case Kind::Shrinker:
            case Kind::MEstimator:
                return true;
            default:
                return false;
        }
    }

    bool pointwise() const {
        return kind_ == Kind::Power || kind_ == Kind::Shrinker || kind_ == Kind::MEstimator ||
               kind_ == Kind::EntropyHRaw;
    }

    // Value on a single singular value, for pointwise kinds.
    double scalar(double x) const {
        switch (kind_) {
            case Kind::Power:
                return x == 0.0 ? 0.0 : std::pow(x, p_);
            case Kind::EntropyHRaw:
                return x == 0.0 ? 0.0 : x * x * std::log(x * x);
            case Kind::Shrinker:
                return shrink(x);
            case Kind::MEstimator:
                return rho(x);
            default:
                throw std::invalid_argument("function is not pointwise");
        }
    }

    double evaluate(const Spectrum& s) const {
        switch (kind_) {
            case Kind::Power:
            case Kind::EntropyHRaw:
            case Kind::Shrinker:
            case Kind::MEstimator: {
                double acc = 0;
                for (double v : s.values) acc += scalar(v);
                return acc;
            }
            case Kind::EntropyH: {
                double f2 = s.frobenius_sq();
                if (f2 <= 0) throw std::invalid_argument("entropy of an all-zero spectrum");
                double norm = std::sqrt(f2);
                double acc = 0;
                for (double v : s.values) {
                    double x = v / norm;
                    if (x > 0) acc += x * x * std::log(x * x);
                }
                return acc;
            }
            case Kind::Shannon: {
                double f2 = s.frobenius_sq();
                if (f2 <= 0) throw std::invalid_argument("entropy of an all-zero spectrum");
                double acc = 0;
                for (double v : s.values) {
                    double w = v * v / f2;
                    if (w > 0) acc -= w * std::log(w);
                }
                return acc;
            }
            case Kind::KyFan: {
                double acc = 0;
                std::size_t limit = static_cast<std::size_t>(k_);
                for (std::size_t i = 0; i < limit; ++i) {
                    double v = i < s.values.size() ? s.values[i] : 0.0;
                    acc += inner_->scalar(v);
                }
                return acc;
            }
        }
        throw std::logic_error("unreachable");
    }

    std::string name() const {
        std::ostringstream os;
        switch (kind_) {
            case Kind::Power: os << "power:" << p_; break;
            case Kind::EntropyH: os << "entropy"; break;
            case Kind::EntropyHRaw: os << "entropy_raw"; break;
            case Kind::Shannon: os << "shannon"; break;
            case Kind::KyFan: os << "kyfan:" << k_ << ":" << inner_->name(); break;
            case Kind::Shrinker: os << "shrinker:" << variant_ << ":" << alpha_; break;
            case Kind::MEstimator: os << "mest:" << m_estimator_name(m_kind_) << ":" << scale_; break;
        }
        return os.str();
    }

    // Parses the CLI spelling produced by name().
    static SpectralFunction parse(const std::string& spec);

  private:
    explicit SpectralFunction(Kind k) : kind_(k) {}

    double shrink(double x) const {
        const double edge = 1.0 + std::sqrt(alpha_);
        auto eta1 = [&](double v) {
            if (v < edge) return 0.0;
            double d = v * v - alpha_ - 1.0;
            return std::sqrt(std::max(d * d - 4.0 * alpha_, 0.0)) / v;
        };
        auto eta2 = [&](double v) {
            if (v < edge) return 0.0;
            double d = v * v - alpha_ - 1.0;
            double inner = d + std::sqrt(std::max(d * d - 4.0 * alpha_, 0.0));
            return std::sqrt(std::max(inner, 0.0)) / std::sqrt(2.0);
        };
        switch (variant_) {
            case 1: return eta1(x);
            case 2: return eta2(x);
            default: {
                double e2 = eta2(x);
                if (e2 == 0.0 || x == 0.0) return 0.0;  // 0 * inf := 0
                double num = e2 * e2 * e2 * e2 - alpha_ - alpha_ * x * e2;
                return std::max(num, 0.0) / (x * e2 * e2);
            }
        }
    }

    double rho(double x) const {
        const double c = scale_;
        switch (m_kind_) {
            case MEstimatorKind::L1L2: return 2.0 * (std::sqrt(1.0 + x * x / 2.0) - 1.0);
            case MEstimatorKind::GemanMcClure: return (x * x / 2.0) / (1.0 + x * x);
            case MEstimatorKind::Fair: return c * c * (x / c - std::log1p(x / c));
            case MEstimatorKind::Welsch: return c * c / 2.0 * (1.0 - std::exp(-x * x / (c * c)));
            case MEstimatorKind::Huber:
                return x <= c ? x * x / 2.0 : c * (x - c / 2.0);
            case MEstimatorKind::Tukey: {
                if (x > c) return c * c / 6.0;
                double u = 1.0 - x * x / (c * c);
                return c * c / 6.0 * (1.0 - u * u * u);
            }
            case MEstimatorKind::Cauchy: return c * c / 2.0 * std::log1p(x * x / (c * c));
        }
        return 0.0;
    }

    Kind kind_;
    double p_ = 1.0;
    int k_ = 1;
    std::shared_ptr<SpectralFunction> inner_;
    int variant_ = 1;
    double alpha_ = 1.0;
    MEstimatorKind m_kind_ = MEstimatorKind::Huber;
    double scale_ = 1.0;
};

inline SpectralFunction SpectralFunction::parse(const std::string& spec) {
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            std::size_t pos = s.find(sep, start);
            parts.push_back(s.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return parts;
    };
    auto parts = split(spec, ':');
    const std::string& head = parts[0];
    auto want = [&](std::size_t lo, std::size_t hi) {
        if (parts.size() < lo || parts.size() > hi)
            throw std::invalid_argument("bad function spec: " + spec);
    };
    if (head == "power") {
        want(2, 2);
        return power(std::stod(parts[1]));
    }
    if (head == "identity") return identity();
    if (head == "entropy") return entropy_h();
    if (head == "entropy_raw") return entropy_h_raw();
    if (head == "shannon") return shannon_entropy();
    if (head == "kyfan") {
        want(2, 64);
        int k = std::stoi(parts[1]);
        if (parts.size() == 2) return ky_fan(k);
        std::string inner = spec.substr(head.size() + 1 + parts[1].size() + 1);
        return ky_fan(k, parse(inner));
    }
    if (head == "shrinker") {
        want(2, 3);
        int variant = std::stoi(parts[1]);
        double alpha = parts.size() > 2 ? std::stod(parts[2]) : 1.0;
        return shrinker(variant, alpha);
    }
    if (head == "mest") {
        want(2, 3);
        double scale = parts.size() > 2 ? std::stod(parts[2]) : 1.0;
        for (MEstimatorKind k :
             {MEstimatorKind::L1L2, MEstimatorKind::GemanMcClure, MEstimatorKind::Fair,
              MEstimatorKind::Welsch, MEstimatorKind::Huber, MEstimatorKind::Tukey,
              MEstimatorKind::Cauchy}) {
            if (parts[1] == m_estimator_name(k)) return m_estimator(k, scale);
        }
        throw std::invalid_argument("unknown m-estimator: " + parts[1]);
    }
    throw std::invalid_argument("unknown function spec: " + spec);
}

}  // namespace specstream
