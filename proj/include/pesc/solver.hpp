#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "costs.hpp"
#include "data_consistency.hpp"
#include "epigraph.hpp"
#include "errors.hpp"
#include "image.hpp"
#include "metrics.hpp"

namespace pesc {

/// Epigraph settings used by the deconvolution loop: one supporting
/// hyperplane per step, stopped by eps or the iteration budget.
inline EpigraphConfig default_solver_epigraph() {
    EpigraphConfig c;
    c.eps = 1e-3;
    c.max_iters = 200;
    c.bundle_size = 1;
    return c;
}

struct SolverConfig {
    std::size_t outer_iters = 10;
    EpigraphConfig epigraph = default_solver_epigraph();
    CostKind cost = CostKind::TV;
    bool use_slabs = false;
    std::optional<double> slab_eps;

    void validate() const {
        if (outer_iters < 1) throw ArgumentError("outer_iters must be at least 1");
        epigraph.validate();
        if (use_slabs && !slab_eps) throw ConfigError("use_slabs requires slab_eps");
    }
};

/// One epigraph step of one outer round.
struct TraceRow {
    std::size_t outer = 0;  // 1-based
    std::size_t inner = 0;  // 1-based
    double dist_to_v0 = 0.0;
    double cost_value = 0.0;
    double data_residual = 0.0;
    std::optional<double> isnr_db;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

/// Summary of one outer round.
struct OuterRecord {
    std::size_t outer = 0;
    double residual_before_sweep = 0.0;
    double residual_after_sweep = 0.0;
    double cost_before_epigraph = 0.0;
    double cost_after_epigraph = 0.0;
    /// ||w - v|| between the epigraph output and its input.
    double input_gap = 0.0;
    std::optional<double> isnr_db;
    std::size_t inner_iterations = 0;
    bool refined = false;
    bool converged = false;
};

struct ConvergenceTrace {
    std::vector<TraceRow> rows;
    std::vector<OuterRecord> outer;
};

struct DeconvolutionResult {
    Image restored;
    ConvergenceTrace trace;
};

/// Raised when an iterate goes non-finite; carries the trace up to that point.
class DivergenceError : public NumericError {
public:
    DivergenceError(const std::string& what, ConvergenceTrace trace)
        : NumericError(what), trace_(std::move(trace)) {}
    const ConvergenceTrace& trace() const noexcept { return trace_; }

private:
    ConvergenceTrace trace_;
};

/**
 * Alternates a Kaczmarz sweep over the measurement hyperplanes (or slabs) with
 * the projection onto the epigraph of the cost, starting from v = z.
 */
inline DeconvolutionResult deconvolve(const Image& z, const Kernel& h, const SolverConfig& cfg,
                                      const std::optional<Image>& ground_truth = std::nullopt) {
    cfg.validate();
    if (ground_truth && !ground_truth->same_shape(z))
        throw ArgumentError("ground truth and observation differ in shape");

    const MeasurementModel model(z, h, cfg.use_slabs ? cfg.slab_eps : std::nullopt);
    const CostFunction cost(cfg.cost);
    ConvergenceTrace trace;
    Image v = z;

    for (std::size_t k = 1; k <= cfg.outer_iters; ++k) {
        OuterRecord rec;
        rec.outer = k;
        rec.residual_before_sweep = data_residual(v, model);
        v = sweep(std::move(v), model);
        if (!v.all_finite()) throw DivergenceError("non-finite values after sweep", trace);
        rec.residual_after_sweep = data_residual(v, model);
        rec.cost_before_epigraph = cost.eval(v);

        auto observe = [&](const EpigraphStep& s) {
            TraceRow row;
            row.outer = k;
            row.inner = s.index;
            row.dist_to_v0 = s.distance;
            row.cost_value = s.cost;
            row.data_residual = data_residual(s.w, model);
            if (ground_truth) row.isnr_db = isnr(z, s.w, *ground_truth);
            trace.rows.push_back(row);
        };

        EpigraphResult r;
        try {
            r = project_epigraph(v, cost, cfg.epigraph, observe);
        } catch (const NumericError& e) {
            throw DivergenceError(e.what(), trace);
        }
        rec.input_gap = std::sqrt(squared_distance(r.w_star, v));
        v = std::move(r.w_star);
        rec.cost_after_epigraph = cost.eval(v);
        rec.inner_iterations = r.iterations;
        rec.refined = r.refined;
        rec.converged = r.converged;
        if (ground_truth) rec.isnr_db = isnr(z, v, *ground_truth);
        trace.outer.push_back(rec);
    }
    return {std::move(v), std::move(trace)};
}

inline constexpr std::string_view kTraceHeader =
    "outer,inner,dist_to_v0,cost_value,data_residual,isnr_db";

namespace detail {
inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_real(const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        throw FormatError("bad number '" + field + "' in trace");
    }
    if (used != field.size()) throw FormatError("bad number '" + field + "' in trace");
    return v;
}
}  // namespace detail

/// CSV lines, header first; isnr_db is left empty without ground truth.
inline std::vector<std::string> trace_to_rows(const ConvergenceTrace& trace) {
    std::vector<std::string> lines;
    lines.reserve(trace.rows.size() + 1);
    lines.emplace_back(kTraceHeader);
    for (const auto& r : trace.rows) {
        std::string line = std::to_string(r.outer) + "," + std::to_string(r.inner) + "," +
                           detail::format_real(r.dist_to_v0) + "," +
                           detail::format_real(r.cost_value) + "," +
                           detail::format_real(r.data_residual) + ",";
        if (r.isnr_db) line += detail::format_real(*r.isnr_db);
        lines.push_back(std::move(line));
    }
    return lines;
}

/// Inverse of trace_to_rows.
inline std::vector<TraceRow> parse_trace_rows(const std::vector<std::string>& lines) {
    if (lines.empty() || lines.front() != kTraceHeader)
        throw FormatError("trace must start with header '" + std::string(kTraceHeader) + "'");
    std::vector<TraceRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(lines[i]);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!lines[i].empty() && lines[i].back() == ',') f.emplace_back();
        if (f.size() != 6) throw FormatError("trace line " + std::to_string(i) + " needs 6 fields");
        TraceRow r;
        r.outer = static_cast<std::size_t>(detail::parse_real(f[0]));
        r.inner = static_cast<std::size_t>(detail::parse_real(f[1]));
        r.dist_to_v0 = detail::parse_real(f[2]);
        r.cost_value = detail::parse_real(f[3]);
        r.data_residual = detail::parse_real(f[4]);
        if (!f[5].empty()) r.isnr_db = detail::parse_real(f[5]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace pesc
