#pragma once

// Stream-to-estimate pipeline shared by the CLI and the test suites.

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "specstream/estimator.hpp"
#include "specstream/exact.hpp"
#include "specstream/f2_sketch.hpp"
#include "specstream/stream_file.hpp"

namespace specstream {

struct EstimateOptions {
    int p = 4;
    double epsilon = 0.25;
    std::uint64_t seed = 1;
    bool with_exact = false;  // also materialize and report the exact value
    std::optional<std::size_t> sampler_cap;
};

inline nlohmann::json config_json(const EstimatorConfig& c) {
    return {{"n", c.n},
            {"p", c.p},
            {"epsilon", c.epsilon},
            {"seed", c.seed},
            {"T", c.T()},
            {"samplers_per_slot", c.samplers_per_slot()},
            {"sampler_reps", c.sampler_reps()},
            {"sampler_rows", c.sampler_rows()},
            {"sampler_width", c.sampler_width()},
            {"heavy_rows", c.heavy_rows()},
            {"heavy_width", c.heavy_width()},
            {"f2_cells", c.f2_cells()},
            {"c_T", c.c_T},
            {"c_R", c.c_R},
            {"c_w", c.c_w},
            {"c_ws", c.c_ws},
            {"c_prime", c.c_prime},
            {"sampler_cap", c.sampler_cap}};
}

// Estimate |A|_p^p from a turnstile stream. p = 2 routes to the plain
// second-moment sketch; odd or sub-2 p is refused (no small sketch can
// answer it: non-even p needs nearly linear space in the matrix dimension).
inline nlohmann::json estimate_stream(const StreamFile& stream, const EstimateOptions& opt) {
    if (stream.n < 2) throw std::invalid_argument("stream declares no dimension");
    if (stream.updates.empty()) throw std::invalid_argument("stream has no updates");
    if (opt.p < 2 || opt.p % 2 != 0)
        throw std::invalid_argument(
            "p=" + std::to_string(opt.p) +
            " refused: only even p is estimable in sublinear space; "
            "non-even p requires nearly n bits even for sparse matrices");

    nlohmann::json result;
    result["p"] = opt.p;
    result["epsilon"] = opt.epsilon;
    result["n"] = stream.n;

    if (opt.p == 2) {
        const std::uint64_t domain = static_cast<std::uint64_t>(stream.n) * stream.n;
        F2Sketch f2 = F2Sketch::for_epsilon(opt.epsilon, domain, derive_seed(opt.seed, 20));
        for (const auto& u : stream.updates)
            f2.update(static_cast<std::uint64_t>(u.row) * stream.n + u.col, u.delta);
        result["Y"] = f2.estimate();
        result["config"] = {{"n", stream.n}, {"p", 2}, {"epsilon", opt.epsilon},
                            {"seed", opt.seed}, {"f2_cells", f2.cells()}};
        result["failed_slots"] = nlohmann::json::array();
        result["memory_bytes"] = f2.cells() * 8;
        result["accumulators"] = f2.cells();
    } else {
        EstimatorConfig cfg;
        cfg.n = stream.n;
        cfg.p = opt.p;
        cfg.epsilon = opt.epsilon;
        cfg.seed = opt.seed;
        if (opt.sampler_cap) cfg.sampler_cap = *opt.sampler_cap;
        SchattenEstimator est(cfg);
        for (const auto& u : stream.updates) est.ingest(u.row, u.col, u.delta);
        EstimatorResult r = est.finalize();
        result["Y"] = r.y;
        result["config"] = config_json(cfg);
        nlohmann::json failed = nlohmann::json::array();
        for (auto [s, t] : r.failed_slots) failed.push_back({{"s", s}, {"t", t}});
        result["failed_slots"] = failed;
        result["discarded_samples"] = r.discarded_samples;
        result["heavy_counts"] = r.heavy_counts;
        result["memory_bytes"] = r.memory.bytes;
        result["accumulators"] = r.memory.accumulators;
        result["l_estimate"] = r.l_estimate;
    }

    if (opt.with_exact) {
        DenseMatrix a = materialize(stream);
        double exact = exact_schatten_even(a, opt.p);
        result["exact"] = exact;
        double y = result["Y"].get<double>();
        result["relative_error"] = exact != 0.0 ? std::abs(y - exact) / std::abs(exact)
                                                : std::abs(y);
    }
    return result;
}

}  // namespace specstream
