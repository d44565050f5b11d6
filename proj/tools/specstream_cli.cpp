// specstream command-line surface: estimate norms from turnstile stream
// files, generate hard instances, evaluate parity gaps, and run the
// numerical identity suites. Every command emits a JSON run report on
// stdout; the "result" subtree is reproducible bit-for-bit from the seed.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "specstream/bhh.hpp"
#include "specstream/distinguish.hpp"
#include "specstream/gap.hpp"
#include "specstream/pipeline.hpp"
#include "specstream/report.hpp"
#include "specstream/verify.hpp"

using nlohmann::json;
using namespace specstream;

namespace {

int cmd_estimate(const std::string& path, int p, double epsilon, std::uint64_t seed,
                 bool exact, std::int64_t sampler_cap) {
    Stopwatch watch;
    StreamFile stream = read_stream(path);
    EstimateOptions opt;
    opt.p = p;
    opt.epsilon = epsilon;
    opt.seed = seed;
    opt.with_exact = exact;
    if (sampler_cap > 0) opt.sampler_cap = static_cast<std::size_t>(sampler_cap);
    json result = estimate_stream(stream, opt);
    json config = {{"stream", path}, {"p", p}, {"epsilon", epsilon}, {"exact", exact}};
    std::cout << make_report("estimate", config, seed, result, watch.ms()).dump(2) << "\n";
    return 0;
}

int cmd_gap(const std::string& f_spec, int t, int m, double gamma, const std::string& kind,
            double tolerance) {
    Stopwatch watch;
    SpectralFunction f = SpectralFunction::parse(f_spec);
    BlockKind bk = kind == "sym" ? BlockKind::SymmetricEvenP : BlockKind::Asymmetric;
    GapReport rep = gap_expectation(f, t, m, gamma, bk, tolerance);
    json config = {{"f", f_spec}, {"t", t}, {"m", m}, {"gamma", gamma}, {"kind", kind},
                   {"tolerance", tolerance}};
    std::cout << make_report("gap", config, 0, rep.to_json(), watch.ms()).dump(2) << "\n";
    return rep.verdict == GapVerdict::NonZero ? 0 : 3;
}

int cmd_verify(const std::string& suite) {
    Stopwatch watch;
    auto checks = run_verify_suite(suite);
    json arr = json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        arr.push_back(c.to_json());
        all_pass = all_pass && c.pass;
    }
    json result = {{"suite", suite}, {"checks", arr}, {"pass", all_pass}};
    std::cout << make_report("verify", {{"suite", suite}}, 0, result, watch.ms()).dump(2) << "\n";
    return all_pass ? 0 : 4;
}

int cmd_bhh(int t, std::size_t n, int m, double gamma, const std::string& promise,
            std::uint64_t seed, const std::string& out_path, bool show_blocks,
            const std::string& f_spec) {
    Stopwatch watch;
    PromiseCase pc = promise == "odd" ? PromiseCase::AllOne : PromiseCase::AllZero;
    BhhInstance inst = sample_instance(t, n, pc, seed);
    HardStream hs = emit_stream(inst, m, gamma, derive_seed(seed, 50));
    StreamFile file = to_stream_file(hs, inst, m, gamma, seed);
    if (!out_path.empty()) write_stream(file, out_path);

    json result;
    result["N"] = hs.N;
    result["records"] = file.updates.size();
    int sum_q = 0;
    json desc = json::array();
    for (const auto& [j, q] : hs.descriptors) {
        sum_q += q;
        if (show_blocks) desc.push_back({{"block", j}, {"q", q}});
    }
    result["sum_q"] = sum_q;
    if (show_blocks) result["blocks"] = desc;
    if (!f_spec.empty()) {
        SpectralFunction f = SpectralFunction::parse(f_spec);
        double value = 0;
        for (const auto& [j, q] : hs.descriptors) {
            BlockParams bp{m, q, gamma, BlockKind::Asymmetric};
            value += f.evaluate(spectrum_asymmetric(bp));
        }
        result["f"] = f_spec;
        result["exact_value"] = value;
    }
    json config = {{"t", t}, {"n", n}, {"m", m}, {"gamma", gamma}, {"case", promise},
                   {"out", out_path}};
    std::cout << make_report("bhh", config, seed, result, watch.ms()).dump(2) << "\n";
    return 0;
}

int cmd_distinguish(const std::string& f_spec, int t, int m, double gamma, std::size_t n,
                    std::size_t trials, std::uint64_t seed, const std::string& kind) {
    Stopwatch watch;
    SpectralFunction f = SpectralFunction::parse(f_spec);
    BlockKind bk = kind == "sym" ? BlockKind::SymmetricEvenP : BlockKind::Asymmetric;
    SeparationReport rep = distinguish_experiment(f, t, m, gamma, n, trials, seed, bk);
    json config = {{"f", f_spec}, {"t", t}, {"m", m}, {"gamma", gamma}, {"n", n},
                   {"trials", trials}, {"kind", kind}};
    std::cout << make_report("distinguish", config, seed, rep.to_json(), watch.ms()).dump(2)
              << "\n";
    return rep.disjoint ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming matrix-spectrum toolkit"};
    app.require_subcommand(1);

    // estimate
    std::string stream_path;
    int p = 4;
    double epsilon = 0.25;
    std::uint64_t seed = 1;
    bool exact = false;
    std::int64_t sampler_cap = -1;
    auto* est = app.add_subcommand("estimate", "estimate |A|_p^p from a stream file");
    est->add_option("stream", stream_path, "turnstile stream file")->required();
    est->add_option("--p", p, "even p (>= 4, or 2 for the Frobenius route)");
    est->add_option("--epsilon", epsilon, "accuracy parameter");
    est->add_option("--seed", seed, "master seed");
    est->add_flag("--exact", exact, "also materialize the matrix and report the exact value");
    est->add_option("--sampler-cap", sampler_cap, "cap on live samplers per slot");

    // gap
    std::string f_spec = "power:1";
    int t = 2, m = 2;
    double gamma = 1.0;
    std::string kind = "asym";
    double tolerance = 1e-10;
    auto* gap = app.add_subcommand("gap", "parity gap of a spectral function on hard blocks");
    gap->add_option("--f", f_spec, "function spec, e.g. power:1, entropy_raw, shrinker:1:1");
    gap->add_option("--t", t, "even group size");
    gap->add_option("--m", m, "block parameter (t <= m <= 12)");
    gap->add_option("--gamma", gamma, "tentacle weight");
    gap->add_option("--kind", kind, "asym | sym")->check(CLI::IsMember({"asym", "sym"}));
    gap->add_option("--tolerance", tolerance, "nonzero verdict tolerance");

    // verify
    std::string suite = "all";
    auto* ver = app.add_subcommand("verify", "run numerical identity suites");
    ver->add_option("--suite", suite, "series | hypergeom | stirling | entropy | all");

    // bhh
    std::size_t bhh_n = 8;
    std::string promise = "even";
    std::string out_path;
    bool show_blocks = false;
    std::string bhh_f;
    auto* bh = app.add_subcommand("bhh", "generate a hard-instance stream file");
    bh->add_option("--t", t, "even hyperedge size");
    bh->add_option("--n", bhh_n, "coordinate count (multiple of 4t)");
    bh->add_option("--m", m, "clique size (>= t)");
    bh->add_option("--gamma", gamma, "tentacle weight (perfect square)");
    bh->add_option("--case", promise, "even | odd")->check(CLI::IsMember({"even", "odd"}));
    bh->add_option("--seed", seed, "master seed");
    bh->add_option("--out", out_path, "output stream path");
    bh->add_flag("--show-blocks", show_blocks, "list block descriptors in the report");
    bh->add_option("--f", bhh_f, "also report the exact f-value of the instance");

    // distinguish
    std::size_t trials = 100;
    auto* dis = app.add_subcommand("distinguish", "two-case separation experiment");
    dis->add_option("--f", f_spec, "block-additive function spec");
    dis->add_option("--t", t, "even group size");
    dis->add_option("--m", m, "block parameter");
    dis->add_option("--gamma", gamma, "tentacle weight");
    dis->add_option("--n", bhh_n, "coordinate count (multiple of 4t)");
    dis->add_option("--trials", trials, "instances per case");
    dis->add_option("--seed", seed, "master seed");
    dis->add_option("--kind", kind, "asym | sym")->check(CLI::IsMember({"asym", "sym"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) return cmd_estimate(stream_path, p, epsilon, seed, exact, sampler_cap);
        if (gap->parsed()) return cmd_gap(f_spec, t, m, gamma, kind, tolerance);
        if (ver->parsed()) return cmd_verify(suite);
        if (bh->parsed())
            return cmd_bhh(t, bhh_n, m, gamma, promise, seed, out_path, show_blocks, bhh_f);
        if (dis->parsed())
            return cmd_distinguish(f_spec, t, m, gamma, bhh_n, trials, seed, kind);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
