#pragma once

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>
#include <variant>

#include "errors.hpp"
#include "image.hpp"

namespace pesc {

/// A nonnegative convex functional with a subgradient selector.
template <typename C>
concept ConvexCost = requires(const C& c, const Image& w) {
    { c.eval(w) } -> std::convertible_to<double>;
    { c.subgradient(w) } -> std::same_as<Image>;
};

namespace detail {
// sign(0) := 0 everywhere, so constant images have a zero subgradient.
inline double sign(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
}  // namespace detail

/// Anisotropic TV: forward differences, dropped at the last row and column.
inline double tv_eval(const Image& img) {
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    double s = 0.0;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double c = img(x, y);
            if (x + 1 < w) s += std::abs(img(x + 1, y) - c);
            if (y + 1 < h) s += std::abs(img(x, y + 1) - c);
        }
    }
    return s;
}

inline Image tv_subgradient(const Image& img) {
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    Image g(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double c = img(x, y);
            if (x + 1 < w) {
                const double s = detail::sign(img(x + 1, y) - c);
                g(x + 1, y) += s;
                g(x, y) -= s;
            }
            if (y + 1 < h) {
                const double s = detail::sign(img(x, y + 1) - c);
                g(x, y + 1) += s;
                g(x, y) -= s;
            }
        }
    }
    return g;
}

inline double l1_eval(const Image& img) {
    double s = 0.0;
    for (double v : img) s += std::abs(v);
    return s;
}

inline Image l1_subgradient(const Image& img) {
    Image g = img;
    for (double& v : g.data()) v = detail::sign(v);
    return g;
}

inline double l2_eval(const Image& img) { return std::sqrt(squared_norm(img)); }

/// w / ||w||, and the zero vector at the origin.
inline Image l2_subgradient(const Image& img) {
    const double n = l2_eval(img);
    if (n == 0.0) return Image(img.width(), img.height());
    return img * (1.0 / n);
}

struct TotalVariation {
    double eval(const Image& w) const { return tv_eval(w); }
    Image subgradient(const Image& w) const { return tv_subgradient(w); }
};

struct L1Norm {
    double eval(const Image& w) const { return l1_eval(w); }
    Image subgradient(const Image& w) const { return l1_subgradient(w); }
};

struct L2Norm {
    double eval(const Image& w) const { return l2_eval(w); }
    Image subgradient(const Image& w) const { return l2_subgradient(w); }
};

enum class CostKind { TV, L1, L2 };

inline std::string_view to_string(CostKind k) noexcept {
    switch (k) {
        case CostKind::TV: return "tv";
        case CostKind::L1: return "l1";
        case CostKind::L2: return "l2";
    }
    return "?";
}

inline CostKind parse_cost_kind(std::string_view name) {
    if (name == "tv") return CostKind::TV;
    if (name == "l1") return CostKind::L1;
    if (name == "l2") return CostKind::L2;
    throw ArgumentError("unknown cost '" + std::string(name) + "' (expected tv, l1 or l2)");
}

/// Runtime-selected cost; itself a ConvexCost.
class CostFunction {
public:
    CostFunction(CostKind kind = CostKind::TV) : kind_(kind) {
        switch (kind) {
            case CostKind::TV: impl_ = TotalVariation{}; break;
            case CostKind::L1: impl_ = L1Norm{}; break;
            case CostKind::L2: impl_ = L2Norm{}; break;
        }
    }

    CostKind kind() const noexcept { return kind_; }

    double eval(const Image& w) const {
        return std::visit([&](const auto& c) { return c.eval(w); }, impl_);
    }
    Image subgradient(const Image& w) const {
        return std::visit([&](const auto& c) { return c.subgradient(w); }, impl_);
    }

private:
    CostKind kind_;
    std::variant<TotalVariation, L1Norm, L2Norm> impl_;
};

static_assert(ConvexCost<TotalVariation>);
static_assert(ConvexCost<L1Norm>);
static_assert(ConvexCost<L2Norm>);
static_assert(ConvexCost<CostFunction>);

}  // namespace pesc
