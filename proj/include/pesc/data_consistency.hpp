#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "errors.hpp"
#include "image.hpp"

namespace pesc {

/// Observations z of the blur h, optionally thickened to slabs |z_i - (w*h)[i]| <= slab_eps.
struct MeasurementModel {
    Image z;
    Kernel h;
    std::optional<double> slab_eps;

    MeasurementModel(Image observations, Kernel kernel, std::optional<double> slab = std::nullopt)
        : z(std::move(observations)), h(std::move(kernel)), slab_eps(slab) {
        if (!z.all_finite()) throw ArgumentError("observations must be finite");
        if (slab_eps && !(*slab_eps >= 0.0 && std::isfinite(*slab_eps)))
            throw ArgumentError("slab_eps must be finite and nonnegative");
    }
};

namespace detail {

// Kernel support clipped to the image around pixel (x, y).
struct Stamp {
    std::ptrdiff_t x0, x1, y0, y1;  // half-open pixel ranges
    std::ptrdiff_t cx, cy;
};

inline Stamp stamp_at(const Image& v, const Kernel& h, std::size_t x, std::size_t y) {
    const auto r = h.radius();
    const auto cx = static_cast<std::ptrdiff_t>(x);
    const auto cy = static_cast<std::ptrdiff_t>(y);
    return {std::max<std::ptrdiff_t>(0, cx - r),
            std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(v.width()), cx + r + 1),
            std::max<std::ptrdiff_t>(0, cy - r),
            std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(v.height()), cy + r + 1),
            cx,
            cy};
}

inline double stamp_sq_norm(const Kernel& h, const Stamp& s) {
    double n = 0.0;
    for (auto py = s.y0; py < s.y1; ++py)
        for (auto px = s.x0; px < s.x1; ++px) {
            const double t = h.tap(px - s.cx, py - s.cy);
            n += t * t;
        }
    return n;
}

inline double stamp_response(const Image& v, const Kernel& h, const Stamp& s) {
    double acc = 0.0;
    for (auto py = s.y0; py < s.y1; ++py)
        for (auto px = s.x0; px < s.x1; ++px)
            acc += v(static_cast<std::size_t>(px), static_cast<std::size_t>(py)) *
                   h.tap(px - s.cx, py - s.cy);
    return acc;
}

inline void stamp_add(Image& v, const Kernel& h, const Stamp& s, double scale) {
    for (auto py = s.y0; py < s.y1; ++py)
        for (auto px = s.x0; px < s.x1; ++px)
            v(static_cast<std::size_t>(px), static_cast<std::size_t>(py)) +=
                scale * h.tap(px - s.cx, py - s.cy);
}

// Moves v onto {(v*h)[i] = target} in place. Uses the truncated norm of the
// stamped kernel so border rows are exact projections too.
inline void project_row_inplace(Image& v, const Kernel& h, std::size_t x, std::size_t y,
                                double target) {
    const Stamp s = stamp_at(v, h, x, y);
    const double n = stamp_sq_norm(h, s);
    if (!(n > 0.0))
        throw NumericError("kernel has zero norm inside the image at (" + std::to_string(x) +
                           "," + std::to_string(y) + ")");
    const double r = target - stamp_response(v, h, s);
    stamp_add(v, h, s, r / n);
}

inline void project_slab_inplace(Image& v, const Kernel& h, std::size_t x, std::size_t y,
                                 double z, double slab) {
    const Stamp s = stamp_at(v, h, x, y);
    const double r = z - stamp_response(v, h, s);
    if (std::abs(r) <= slab) return;
    const double n = stamp_sq_norm(h, s);
    if (!(n > 0.0)) throw NumericError("kernel has zero norm inside the image");
    const double step = r > 0.0 ? r - slab : r + slab;
    stamp_add(v, h, s, step / n);
}

inline void require_model_shape(const Image& v, const MeasurementModel& m) {
    if (!v.same_shape(m.z)) throw ArgumentError("image and observations differ in shape");
}

}  // namespace detail

/// Orthogonal projection onto the measurement hyperplane {w : (w*h)[i] = z_i}.
inline Image project_row(Image v, const MeasurementModel& m, std::size_t x, std::size_t y) {
    detail::require_model_shape(v, m);
    v.check_index(x, y);
    detail::project_row_inplace(v, m.h, x, y, m.z(x, y));
    return v;
}

/// Projection onto the slab {w : |z_i - (w*h)[i]| <= slab_eps}.
inline Image project_slab(Image v, const MeasurementModel& m, std::size_t x, std::size_t y) {
    if (!m.slab_eps) throw ConfigError("project_slab requires slab_eps");
    detail::require_model_shape(v, m);
    v.check_index(x, y);
    detail::project_slab_inplace(v, m.h, x, y, m.z(x, y), *m.slab_eps);
    return v;
}

/// One Kaczmarz pass over all pixels in row-major order, each row action feeding the next.
inline Image sweep(Image v, const MeasurementModel& m) {
    detail::require_model_shape(v, m);
    for (std::size_t y = 0; y < v.height(); ++y)
        for (std::size_t x = 0; x < v.width(); ++x) {
            if (m.slab_eps)
                detail::project_slab_inplace(v, m.h, x, y, m.z(x, y), *m.slab_eps);
            else
                detail::project_row_inplace(v, m.h, x, y, m.z(x, y));
        }
    return v;
}

/// ||z - v*h||.
inline double data_residual(const Image& v, const MeasurementModel& m) {
    detail::require_model_shape(v, m);
    return std::sqrt(squared_distance(convolve_full(v, m.h), m.z));
}

}  // namespace pesc
