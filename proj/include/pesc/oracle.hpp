#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "costs.hpp"
#include "errors.hpp"
#include "image.hpp"

// Reference solvers for tiny instances. Nothing here shares code with the
// epigraph projection; the two are meant to check each other.

namespace pesc::oracle {

struct OracleConfig {
    /// Fraction of 1/L used as the dual gradient step for the TV prox.
    double step = 1.0;
    /// Iteration cap for the TV prox.
    std::size_t iters = 50000;
    /// Convergence tolerance for the prox and the bisection on y.
    double tol = 1e-12;

    void validate() const {
        if (!(step > 0.0 && step <= 1.0)) throw ArgumentError("oracle step must be in (0, 1]");
        if (iters < 1) throw ArgumentError("oracle iters must be positive");
        if (!(tol > 0.0)) throw ArgumentError("oracle tol must be positive");
    }
};

struct OracleResult {
    Image w;
    double y = 0.0;
    bool converged = false;
    /// No random 1e-4 perturbation lowered the objective by more than 1e-9.
    bool stationary = false;
};

/// ||v - w||^2 + f(w)^2, the squared distance from (v, 0) to (w, f(w)).
template <ConvexCost Cost>
double objective(const Image& v, const Image& w, const Cost& f) {
    const double fw = f.eval(w);
    return squared_distance(v, w) + fw * fw;
}

namespace detail {

inline Image soft_threshold(const Image& v, double t) {
    Image out = v;
    for (double& x : out.data()) x = x > t ? x - t : (x < -t ? x + t : 0.0);
    return out;
}

inline Image shrink_l2(const Image& v, double t) {
    const double n = std::sqrt(squared_norm(v));
    if (n <= t) return Image(v.width(), v.height());
    return v * (1.0 - t / n);
}

// Anisotropic TV prox by accelerated projected gradient on the dual
// (one bounded variable per neighbor difference). The dual state is kept
// between calls as a warm start.
class TvProx {
public:
    TvProx(std::size_t width, std::size_t height)
        : w_(width), h_(height), px_(height * (width - 1), 0.0), py_((height - 1) * width, 0.0) {}

    Image operator()(const Image& v, double t, const OracleConfig& cfg) {
        if (t <= 0.0) return v;
        const double lip = 8.0 * t * t;
        const double step = cfg.step / lip;
        std::vector<double> qx = px_, qy = py_;
        double tk = 1.0;
        Image w = primal(v, t, qx, qy);
        for (std::size_t it = 0; it < cfg.iters; ++it) {
            std::vector<double> nx(qx.size()), ny(qy.size());
            double change = 0.0;
            for (std::size_t y = 0; y < h_; ++y)
                for (std::size_t x = 0; x + 1 < w_; ++x) {
                    const std::size_t e = y * (w_ - 1) + x;
                    const double grad = -t * (w(x + 1, y) - w(x, y));
                    nx[e] = std::clamp(qx[e] - step * grad, -1.0, 1.0);
                    change = std::max(change, std::abs(nx[e] - px_[e]));
                }
            for (std::size_t y = 0; y + 1 < h_; ++y)
                for (std::size_t x = 0; x < w_; ++x) {
                    const std::size_t e = y * w_ + x;
                    const double grad = -t * (w(x, y + 1) - w(x, y));
                    ny[e] = std::clamp(qy[e] - step * grad, -1.0, 1.0);
                    change = std::max(change, std::abs(ny[e] - py_[e]));
                }
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
            const double mom = (tk - 1.0) / tn;
            for (std::size_t e = 0; e < nx.size(); ++e) qx[e] = nx[e] + mom * (nx[e] - px_[e]);
            for (std::size_t e = 0; e < ny.size(); ++e) qy[e] = ny[e] + mom * (ny[e] - py_[e]);
            px_ = std::move(nx);
            py_ = std::move(ny);
            tk = tn;
            w = primal(v, t, qx, qy);
            if (it > 10 && change < cfg.tol) break;
        }
        return primal(v, t, px_, py_);
    }

private:
    Image primal(const Image& v, double t, const std::vector<double>& qx,
                 const std::vector<double>& qy) const {
        Image w = v;
        for (std::size_t y = 0; y < h_; ++y)
            for (std::size_t x = 0; x + 1 < w_; ++x) {
                const double p = qx[y * (w_ - 1) + x];
                w(x + 1, y) -= t * p;
                w(x, y) += t * p;
            }
        for (std::size_t y = 0; y + 1 < h_; ++y)
            for (std::size_t x = 0; x < w_; ++x) {
                const double p = qy[y * w_ + x];
                w(x, y + 1) -= t * p;
                w(x, y) += t * p;
            }
        return w;
    }

    std::size_t w_, h_;
    std::vector<double> px_, py_;
};

inline bool stationary(const Image& v, const Image& w, const CostFunction& f, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const double base = objective(v, w, f);
    for (int trial = 0; trial < 100; ++trial) {
        Image dir(w.width(), w.height());
        for (double& x : dir.data()) x = normal(rng);
        Image probe = w + dir * (1e-4 / std::sqrt(squared_norm(dir)));
        if (objective(v, probe, f) < base - 1e-9) return false;
    }
    return true;
}

}  // namespace detail

/**
 * Nearest point of the epigraph {y >= f(w)} to (v, 0), for vectors of at
 * most 16 entries. For a nonnegative f the nearest point is (w, f(w)) with
 * w = prox_{y f}(v) and y = f(w); y is found by bisection on
 * t -> f(prox_{t f}(v)) - t, which is decreasing.
 */
inline OracleResult epigraph_projection(const Image& v, const CostFunction& f,
                                        const OracleConfig& cfg = {}) {
    cfg.validate();
    if (v.size() > 16) throw ArgumentError("oracle is limited to 16 entries");

    OracleResult res;
    const double fv = f.eval(v);
    if (fv <= 0.0) {
        res.w = v;
        res.y = fv;
        res.converged = true;
        res.stationary = true;
        return res;
    }

    detail::TvProx tv_prox(v.width(), v.height());
    auto prox = [&](double t) -> Image {
        switch (f.kind()) {
            case CostKind::L1: return detail::soft_threshold(v, t);
            case CostKind::L2: return detail::shrink_l2(v, t);
            case CostKind::TV: return tv_prox(v, t, cfg);
        }
        return v;
    };

    double lo = 0.0;
    double hi = fv;
    for (int it = 0; it < 200 && hi - lo > cfg.tol * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f.eval(prox(mid)) > mid)
            lo = mid;
        else
            hi = mid;
    }
    res.converged = hi - lo <= cfg.tol * (1.0 + hi) * 2.0;
    res.w = prox(0.5 * (lo + hi));
    res.y = f.eval(res.w);
    res.stationary = detail::stationary(v, res.w, f, 0x5eed);
    return res;
}

struct CostCheckReport {
    std::size_t samples = 0;
    double max_violation = 0.0;
};

/**
 * Checks f(u) >= f(w) + <g(w), u - w> on random pairs. Half of the draws are
 * small integers so that ties (kinks) are exercised.
 */
inline CostCheckReport cost_check(const CostFunction& f, std::size_t width, std::size_t height,
                                  std::size_t samples, std::uint64_t seed) {
    CostCheckReport rep;
    rep.samples = samples;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> real(-5.0, 5.0);
    std::uniform_int_distribution<int> integer(-3, 3);
    auto draw = [&](bool ties) {
        Image img(width, height);
        for (double& x : img.data()) x = ties ? integer(rng) : real(rng);
        return img;
    };
    for (std::size_t s = 0; s < samples; ++s) {
        const bool ties = s % 2 == 1;
        const Image w = draw(ties);
        const Image u = draw(ties);
        const double lower = f.eval(w) + dot(f.subgradient(w), u - w);
        rep.max_violation = std::max(rep.max_violation, lower - f.eval(u));
    }
    return rep;
}

}  // namespace pesc::oracle
