#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pesc/pesc.hpp"

namespace pesc::cli {

enum ExitCode : int { kOk = 0, kNumeric = 1, kUsage = 2 };

namespace detail {

inline std::string fixed4(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

inline std::string full(double v) { return pesc::detail::format_real(v); }

inline void write_manifest(const std::filesystem::path& path, const std::string& command,
                           const std::vector<std::string>& argv, const nlohmann::json& params) {
    nlohmann::json m;
    m["tool"] = "pesc";
    m["version"] = kVersion;
    m["command"] = command;
    m["argv"] = argv;
    m["params"] = params;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write manifest '" + path.string() + "'");
    out << m.dump() << '\n';
}

inline double default_eps() {
    if (const char* env = std::getenv("PESC_DEFAULT_EPS")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0))
            throw ArgumentError("PESC_DEFAULT_EPS must be a positive number");
        return v;
    }
    return default_solver_epigraph().eps;
}

struct SynthArgs {
    std::string clean, kernel, out, sigma_out, manifest;
    double bsnr = 40.0;
    std::uint64_t seed = 0;
};

struct DeconvArgs {
    std::string blurred, kernel, cost = "tv", truth, out, trace, manifest;
    std::size_t iters = 10;
    std::optional<double> eps;
    std::size_t max_inner = 200;
    std::size_t bundle = 1;
    std::optional<double> slab_eps;
    double interior_margin = 0.0;
};

struct MetricsArgs {
    std::string orig, degraded, restored, manifest;
};

struct SceneArgs {
    std::size_t width = 64, height = 64;
    std::string out;
};

inline int run_synth(const SynthArgs& a, std::ostream& out) {
    const Image clean = io::read_pgm(a.clean);
    const Kernel kernel = io::read_kernel(a.kernel);
    const Degraded d = degrade(clean, {kernel, a.bsnr, a.seed});
    io::write_pgm(a.out, d.z);
    const Image written = io::quantized(d.z);

    const std::string sidecar = a.sigma_out.empty() ? a.out + ".sigma.txt" : a.sigma_out;
    io::write_lines(sidecar, {"sigma=" + full(d.sigma),
                              "empirical_bsnr_db=" + full(empirical_bsnr(d.z_tilde, d.z)),
                              "quantized_bsnr_db=" + full(empirical_bsnr(d.z_tilde, written))});
    out << "sigma=" << full(d.sigma) << '\n';

    const std::vector<std::string> argv{"synth",  "--clean", a.clean,        "--kernel",
                                        a.kernel, "--bsnr",  full(a.bsnr),   "--seed",
                                        std::to_string(a.seed), "--out", a.out,
                                        "--sigma-out", sidecar};
    nlohmann::json params{{"clean", a.clean}, {"kernel", a.kernel}, {"bsnr_db", a.bsnr},
                          {"seed", a.seed},   {"out", a.out},       {"sigma_out", sidecar}};
    write_manifest(a.manifest.empty() ? a.out + ".manifest.jsonl" : a.manifest, "synth", argv,
                   params);
    return kOk;
}

inline int run_deconv(const DeconvArgs& a, std::ostream& out) {
    const Image z = io::read_pgm(a.blurred);
    const Kernel kernel = io::read_kernel(a.kernel);
    std::optional<Image> truth;
    if (!a.truth.empty()) {
        truth = io::read_pgm(a.truth);
        if (!truth->same_shape(z)) throw ArgumentError("truth and blurred images differ in shape");
    }

    SolverConfig cfg;
    cfg.outer_iters = a.iters;
    cfg.cost = parse_cost_kind(a.cost);
    cfg.epigraph.eps = a.eps ? *a.eps : default_eps();
    cfg.epigraph.max_iters = a.max_inner;
    cfg.epigraph.bundle_size = a.bundle;
    if (a.interior_margin > 0.0) {
        cfg.epigraph.mode = EpigraphMode::Interior;
        cfg.epigraph.interior_margin = a.interior_margin;
    }
    if (a.slab_eps) {
        cfg.use_slabs = true;
        cfg.slab_eps = a.slab_eps;
    }

    const DeconvolutionResult r = deconvolve(z, kernel, cfg, truth);
    io::write_pgm(a.out, r.restored);
    if (!a.trace.empty()) io::write_lines(a.trace, trace_to_rows(r.trace));
    if (truth)
        out << "ISNR_dB=" << fixed4(isnr(z, r.restored, *truth))
            << " SNR_dB=" << fixed4(snr(r.restored, *truth)) << '\n';

    std::vector<std::string> argv{"deconv", "--blurred", a.blurred, "--kernel", a.kernel,
                                  "--cost", a.cost, "--iters", std::to_string(a.iters),
                                  "--eps", full(cfg.epigraph.eps), "--max-inner",
                                  std::to_string(a.max_inner), "--bundle", std::to_string(a.bundle),
                                  "--out", a.out};
    if (a.slab_eps) argv.insert(argv.end(), {"--slab-eps", full(*a.slab_eps)});
    if (a.interior_margin > 0.0) argv.insert(argv.end(), {"--interior-margin", full(a.interior_margin)});
    if (truth) argv.insert(argv.end(), {"--truth", a.truth});
    if (!a.trace.empty()) argv.insert(argv.end(), {"--trace", a.trace});
    nlohmann::json params{{"blurred", a.blurred},  {"kernel", a.kernel},
                          {"cost", a.cost},        {"outer_iters", a.iters},
                          {"eps", cfg.epigraph.eps}, {"max_inner", a.max_inner},
                          {"bundle_size", a.bundle}, {"interior_margin", a.interior_margin},
                          {"out", a.out}};
    params["slab_eps"] = a.slab_eps ? nlohmann::json(*a.slab_eps) : nlohmann::json(nullptr);
    params["truth"] = a.truth;
    params["trace"] = a.trace;
    write_manifest(a.manifest.empty() ? a.out + ".manifest.jsonl" : a.manifest, "deconv", argv,
                   params);
    return kOk;
}

inline int run_metrics(const MetricsArgs& a, std::ostream& out) {
    const Image orig = io::read_pgm(a.orig);
    const Image degraded = io::read_pgm(a.degraded);
    const Image restored = io::read_pgm(a.restored);
    if (!orig.same_shape(degraded) || !orig.same_shape(restored))
        throw ArgumentError("metrics inputs differ in shape");

    out << "ERR_ENERGY_DEGRADED=" << fixed4(squared_distance(degraded, orig)) << '\n';
    out << "ERR_ENERGY_RESTORED=" << fixed4(squared_distance(restored, orig)) << '\n';
    out << "DEGRADED_SNR_dB=" << fixed4(snr(degraded, orig)) << '\n';
    out << "ISNR_dB=" << fixed4(isnr(degraded, restored, orig)) << '\n';
    out << "SNR_dB=" << fixed4(snr(restored, orig)) << '\n';

    if (!a.manifest.empty()) {
        write_manifest(a.manifest, "metrics",
                       {"metrics", "--orig", a.orig, "--degraded", a.degraded, "--restored",
                        a.restored, "--manifest", a.manifest},
                       {{"orig", a.orig}, {"degraded", a.degraded}, {"restored", a.restored}});
    }
    return kOk;
}

inline int run_scene(const SceneArgs& a, std::ostream& out) {
    io::write_pgm(a.out, make_test_scene(a.width, a.height));
    out << "wrote " << a.width << "x" << a.height << " scene to " << a.out << '\n';
    return kOk;
}

}  // namespace detail

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

namespace detail {
inline int run_replay(const std::string& manifest, std::ostream& out, std::ostream& err) {
    const auto lines = io::read_lines(manifest);
    if (lines.empty()) throw FormatError("empty manifest '" + manifest + "'");
    nlohmann::json m;
    try {
        m = nlohmann::json::parse(lines.front());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad manifest: ") + e.what());
    }
    if (!m.contains("argv") || !m["argv"].is_array()) throw FormatError("manifest has no argv");
    auto argv = m["argv"].get<std::vector<std::string>>();
    if (!argv.empty() && argv.front() == "replay") throw FormatError("manifest replays itself");
    return run(argv, out, err);
}
}  // namespace detail

/// Runs one command; args exclude the program name. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deconvolution by projections onto the epigraph of a convex cost"};
    app.require_subcommand(1);

    detail::SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Blur a clean image and add noise at a target BSNR");
    s->add_option("--clean", synth.clean, "clean PGM image")->required();
    s->add_option("--kernel", synth.kernel, "kernel text file")->required();
    s->add_option("--bsnr", synth.bsnr, "target BSNR in dB (inf for noiseless)")->required();
    s->add_option("--seed", synth.seed, "noise seed")->required();
    s->add_option("--out", synth.out, "degraded PGM output")->required();
    s->add_option("--sigma-out", synth.sigma_out, "sidecar with sigma and achieved BSNR");
    s->add_option("--manifest", synth.manifest, "manifest path (default <out>.manifest.jsonl)");

    detail::DeconvArgs dec;
    auto* d = app.add_subcommand("deconv", "Restore a blurred, noisy image");
    d->add_option("--blurred", dec.blurred, "observed PGM image")->required();
    d->add_option("--kernel", dec.kernel, "kernel text file")->required();
    d->add_option("--cost", dec.cost, "cost function")
        ->check(CLI::IsMember({"tv", "l1", "l2"}));
    d->add_option("-K,--iters", dec.iters, "outer iterations")->check(CLI::PositiveNumber);
    d->add_option("--eps", dec.eps, "epigraph stopping threshold (env PESC_DEFAULT_EPS)")
        ->check(CLI::PositiveNumber);
    d->add_option("--max-inner", dec.max_inner, "epigraph iteration budget")
        ->check(CLI::PositiveNumber);
    d->add_option("--bundle", dec.bundle, "supporting hyperplanes retained (0 = all)");
    d->add_option("--slab-eps", dec.slab_eps, "hyperslab half-width")->check(CLI::NonNegativeNumber);
    d->add_option("--interior-margin", dec.interior_margin, "step into the epigraph")
        ->check(CLI::NonNegativeNumber);
    d->add_option("--truth", dec.truth, "ground-truth PGM for ISNR/SNR");
    d->add_option("--out", dec.out, "restored PGM output")->required();
    d->add_option("--trace", dec.trace, "convergence trace CSV");
    d->add_option("--manifest", dec.manifest, "manifest path (default <out>.manifest.jsonl)");

    detail::MetricsArgs met;
    auto* m = app.add_subcommand("metrics", "Report ISNR and SNR of a restoration");
    m->add_option("--orig", met.orig, "original PGM")->required();
    m->add_option("--degraded", met.degraded, "degraded PGM")->required();
    m->add_option("--restored", met.restored, "restored PGM")->required();
    m->add_option("--manifest", met.manifest, "manifest path");

    detail::SceneArgs scene;
    auto* sc = app.add_subcommand("scene", "Write the piecewise-constant test scene");
    sc->add_option("--width", scene.width)->check(CLI::PositiveNumber);
    sc->add_option("--height", scene.height)->check(CLI::PositiveNumber);
    sc->add_option("--out", scene.out, "PGM output")->required();

    std::string manifest;
    auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    rp->add_option("manifest", manifest, "manifest file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (s->parsed()) return detail::run_synth(synth, out);
        if (d->parsed()) return detail::run_deconv(dec, out);
        if (m->parsed()) return detail::run_metrics(met, out);
        if (sc->parsed()) return detail::run_scene(scene, out);
        if (rp->parsed()) return detail::run_replay(manifest, out, err);
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace pesc::cli
