#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "costs.hpp"
#include "detail/halfspace_bundle.hpp"
#include "errors.hpp"
#include "image.hpp"

namespace pesc {

enum class EpigraphMode { Boundary, Interior };

struct EpigraphConfig {
    /// Stop once successive lifted hyperplane iterates move by at most eps.
    double eps = 1e-3;
    std::size_t max_iters = 200;
    EpigraphMode mode = EpigraphMode::Boundary;
    /// Extra step into the epigraph along the projection direction (Interior mode only).
    double interior_margin = 0.0;
    /// Supporting hyperplanes retained per step. 1 projects onto the latest
    /// hyperplane only; 0 retains all of them, which converges to the exact
    /// projection.
    std::size_t bundle_size = 0;

    void validate() const {
        if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("eps must be positive");
        if (max_iters < 1) throw ArgumentError("max_iters must be at least 1");
        if (!(interior_margin >= 0.0) || !std::isfinite(interior_margin))
            throw ArgumentError("interior_margin must be nonnegative");
    }
};

struct EpigraphResult {
    Image w_star;
    double y_star = 0.0;
    std::size_t iterations = 0;
    /// Distance from (v, 0) to the feasible lifted iterate (w_i, f(w_i)).
    std::vector<double> distances;
    /// Distance from (v, 0) to the hyperplane iterate; a lower bound on the
    /// distance to the epigraph.
    std::vector<double> bound_distances;
    std::vector<double> cost_values;
    /// 1-based iteration of w_star.
    std::size_t best_iteration = 0;
    bool refined = false;
    bool converged = false;
};

/// Per-iteration view handed to an optional observer.
struct EpigraphStep {
    std::size_t index;  // 1-based
    const Image& w;
    double cost;
    double distance;
    double bound_distance;
    bool refined;
};

using EpigraphObserver = std::function<void(const EpigraphStep&)>;

/// Projection onto the half-space {y <= alpha}.
inline LiftedVector project_level_set(LiftedVector v, double alpha = 0.0) {
    v.y = std::min(v.y, alpha);
    return v;
}

/**
 * Orthogonal projection of v0 onto the hyperplane that supports the epigraph
 * of f at (anchor, f(anchor)):  <g, u> - y = <g, anchor> - f(anchor),
 * g a subgradient of f at the anchor.
 */
template <ConvexCost Cost>
LiftedVector project_supporting_hyperplane(const LiftedVector& v0, const Image& anchor,
                                           const Cost& f) {
    const Image g = f.subgradient(anchor);
    const double offset = dot(g, anchor) - f.eval(anchor);
    const double residual = dot(g, v0.w) - v0.y - offset;
    const double t = residual / (squared_norm(g) + 1.0);
    LiftedVector out{v0.w - g * t, v0.y + t};
    return out;
}

/**
 * Projects (v, 0) onto the epigraph {(w, y) : y >= f(w)}.
 *
 * Starting from the anchor v, each step adds the supporting hyperplane of the
 * epigraph at the current anchor, projects (v, 0) onto the retained hyperplanes
 * and takes the w-part of the result (its level-set projection) as the next
 * anchor. Once the distance to the feasible iterate first increases, anchors
 * switch to the midpoint of the last two iterates. The returned point is the
 * feasible iterate (w, f(w)) closest to (v, 0).
 */
template <ConvexCost Cost>
EpigraphResult project_epigraph(const Image& v, const Cost& f, const EpigraphConfig& cfg,
                                const EpigraphObserver& observer = {}) {
    cfg.validate();
    if (!v.all_finite()) throw NumericError("epigraph input contains non-finite values");

    EpigraphResult res;
    const double fv = f.eval(v);
    if (fv <= 0.0) {
        // (v, 0) already lies in the epigraph.
        res.w_star = v;
        res.y_star = fv;
        res.iterations = 1;
        res.distances = {0.0};
        res.bound_distances = {0.0};
        res.cost_values = {fv};
        res.best_iteration = 1;
        res.converged = true;
        if (observer) observer({1, v, fv, 0.0, 0.0, false});
        return res;
    }

    detail::HalfspaceBundle bundle(cfg.bundle_size);
    // Candidates are the hyperplane iterates only, never v itself.
    Image best = v;
    double best_dist = std::numeric_limits<double>::infinity();

    std::vector<Image> anchors{v};
    Image prev_w;
    double prev_y = 0.0;
    bool have_prev = false;

    auto add_cut = [&](const Image& a) {
        Image g = f.subgradient(a);
        const double violation = f.eval(a) + dot(g, v) - dot(g, a);
        bundle.add(std::move(g), violation);
    };

    for (std::size_t i = 1; i <= cfg.max_iters; ++i) {
        for (const auto& a : anchors) add_cut(a);
        bundle.solve();
        LiftedVector x = bundle.project(v);
        if (!x.w.all_finite() || !std::isfinite(x.y))
            throw NumericError("non-finite iterate in epigraph projection at step " +
                               std::to_string(i));

        const double gap2 = squared_distance(x.w, v);
        const double fw = f.eval(x.w);
        const double d = std::sqrt(gap2 + fw * fw);
        const double bound = std::sqrt(gap2 + x.y * x.y);

        if (!res.distances.empty() && d > res.distances.back()) res.refined = true;
        res.distances.push_back(d);
        res.bound_distances.push_back(bound);
        res.cost_values.push_back(fw);
        res.iterations = i;
        if (d < best_dist) {
            best_dist = d;
            best = x.w;
            res.best_iteration = i;
        }
        if (observer) observer({i, x.w, fw, d, bound, res.refined});

        if (have_prev) {
            const double dy = x.y - prev_y;
            const double step = std::sqrt(squared_distance(x.w, prev_w) + dy * dy);
            if (step <= cfg.eps) {
                res.converged = true;
                break;
            }
        }

        anchors.clear();
        if (res.refined && have_prev) {
            Image mid = (x.w + prev_w) * 0.5;
            // A lone midpoint cut can leave the iterate in place; keep a cut at
            // the iterate too unless only one hyperplane is retained.
            if (cfg.bundle_size != 1) anchors.push_back(x.w);
            anchors.push_back(std::move(mid));
        } else {
            anchors.push_back(x.w);
        }
        prev_w = std::move(x.w);
        prev_y = x.y;
        have_prev = true;
    }

    res.w_star = std::move(best);
    res.y_star = f.eval(res.w_star);

    if (cfg.mode == EpigraphMode::Interior && cfg.interior_margin > 0.0 && best_dist > 0.0) {
        const double t = cfg.interior_margin / best_dist;
        Image moved = res.w_star + (res.w_star - v) * t;
        double y = res.y_star + res.y_star * t;
        res.y_star = std::max(y, f.eval(moved));
        res.w_star = std::move(moved);
    }
    return res;
}

}  // namespace pesc
