#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "../image.hpp"

namespace pesc::detail {

/**
 * A set of supporting half-spaces {(u, y) : <g_j, u> - y <= <g_j, a_j> - f(a_j)}
 * of an epigraph, and the orthogonal projection of a fixed lifted point (v, 0)
 * onto their intersection.
 *
 * Each cut is stored through its normal g_j and its violation at (v, 0),
 * c_j = f(a_j) + <g_j, v - a_j>. The projection is v - sum_j lambda_j g_j with
 * lifted coordinate sum_j lambda_j, where lambda >= 0 minimizes
 * 1/2 lambda' G lambda - c' lambda and G_jk = <g_j, g_k> + 1.
 * The dual is solved with an active-set (Lawson-Hanson style) method.
 */
class HalfspaceBundle {
public:
    /// capacity 0 keeps every cut; otherwise the oldest cuts are evicted first.
    explicit HalfspaceBundle(std::size_t capacity) : capacity_(capacity) {}

    std::size_t size() const noexcept { return normals_.size(); }

    void add(Image normal, double violation) {
        if (capacity_ != 0 && normals_.size() == capacity_) evict_front();

        const auto m = static_cast<Eigen::Index>(normals_.size());
        gram_.conservativeResize(m + 1, m + 1);
        for (Eigen::Index j = 0; j < m; ++j) {
            const double gjk = dot(normals_[static_cast<std::size_t>(j)], normal) + 1.0;
            gram_(j, m) = gjk;
            gram_(m, j) = gjk;
        }
        gram_(m, m) = squared_norm(normal) + 1.0;

        normals_.push_back(std::move(normal));
        violations_.push_back(violation);
        lambda_.push_back(0.0);
    }

    /// Multipliers of the current projection, one per cut (oldest first).
    const std::vector<double>& solve() {
        const auto m = static_cast<Eigen::Index>(normals_.size());
        Eigen::VectorXd c(m);
        for (Eigen::Index j = 0; j < m; ++j) c(j) = violations_[static_cast<std::size_t>(j)];
        const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
        const double tol = 1e-13 * scale;

        Eigen::VectorXd lam = Eigen::VectorXd::Zero(m);
        std::vector<Eigen::Index> active;
        for (Eigen::Index j = 0; j < m; ++j)
            if (lambda_[static_cast<std::size_t>(j)] > 0.0) active.push_back(j);

        // Warm start from the previous support when it is still strictly feasible.
        if (!active.empty()) {
            Eigen::VectorXd s = solve_on(active, c);
            if ((s.array() > 0.0).all()) {
                for (std::size_t k = 0; k < active.size(); ++k) lam(active[k]) = s(static_cast<Eigen::Index>(k));
            } else {
                active.clear();
            }
        }

        const Eigen::Index max_outer = 3 * m + 10;
        for (Eigen::Index outer = 0; outer < max_outer; ++outer) {
            const Eigen::VectorXd grad = c - gram_ * lam;
            Eigen::Index best = -1;
            double best_val = tol;
            for (Eigen::Index j = 0; j < m; ++j) {
                if (std::find(active.begin(), active.end(), j) != active.end()) continue;
                if (grad(j) > best_val) {
                    best_val = grad(j);
                    best = j;
                }
            }
            if (best < 0) break;
            active.push_back(best);

            for (Eigen::Index inner = 0; inner <= m; ++inner) {
                const Eigen::VectorXd s = solve_on(active, c);
                bool positive = true;
                for (Eigen::Index k = 0; k < s.size(); ++k) positive = positive && s(k) > 0.0;
                if (positive) {
                    lam.setZero();
                    for (std::size_t k = 0; k < active.size(); ++k) lam(active[k]) = s(static_cast<Eigen::Index>(k));
                    break;
                }
                double alpha = 1.0;
                for (std::size_t k = 0; k < active.size(); ++k) {
                    const double sk = s(static_cast<Eigen::Index>(k));
                    const double lk = lam(active[k]);
                    if (sk <= 0.0) alpha = std::min(alpha, lk / (lk - sk));
                }
                for (std::size_t k = 0; k < active.size(); ++k) {
                    const auto j = active[k];
                    lam(j) += alpha * (s(static_cast<Eigen::Index>(k)) - lam(j));
                }
                std::erase_if(active, [&](Eigen::Index j) {
                    if (lam(j) <= 1e-15 * scale) {
                        lam(j) = 0.0;
                        return true;
                    }
                    return false;
                });
            }
        }

        for (Eigen::Index j = 0; j < m; ++j) lambda_[static_cast<std::size_t>(j)] = lam(j);
        return lambda_;
    }

    /// Projection of (v, 0) for the multipliers from the last solve().
    LiftedVector project(const Image& v) const {
        LiftedVector x{v, 0.0};
        for (std::size_t j = 0; j < normals_.size(); ++j) {
            const double l = lambda_[j];
            if (l == 0.0) continue;
            auto w = x.w.data();
            auto g = normals_[j].data();
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= l * g[i];
            x.y += l;
        }
        return x;
    }

private:
    Eigen::VectorXd solve_on(const std::vector<Eigen::Index>& active, const Eigen::VectorXd& c) const {
        const auto n = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd sub(n, n);
        Eigen::VectorXd rhs(n);
        for (Eigen::Index a = 0; a < n; ++a) {
            rhs(a) = c(active[static_cast<std::size_t>(a)]);
            for (Eigen::Index b = 0; b < n; ++b)
                sub(a, b) = gram_(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)]);
        }
        return sub.ldlt().solve(rhs);
    }

    void evict_front() {
        normals_.erase(normals_.begin());
        violations_.erase(violations_.begin());
        lambda_.erase(lambda_.begin());
        const auto m = gram_.rows() - 1;
        Eigen::MatrixXd kept = gram_.bottomRightCorner(m, m);
        gram_ = std::move(kept);
    }

    std::size_t capacity_;
    std::vector<Image> normals_;
    std::vector<double> violations_;
    std::vector<double> lambda_;
    Eigen::MatrixXd gram_;
};

}  // namespace pesc::detail
