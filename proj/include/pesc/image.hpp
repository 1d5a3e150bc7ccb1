#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace pesc {

/**
 * A 2D grid of real intensities stored row-major. Pixel (x, y) is column x of
 * row y. Values are not clamped; quantization happens only at file I/O.
 */
class Image {
public:
    Image() = default;

    Image(std::size_t width, std::size_t height, double fill = 0.0)
        : width_(width), height_(height), data_(width * height, fill) {
        check_shape();
        check_finite(fill);
    }

    Image(std::size_t width, std::size_t height, std::vector<double> data)
        : width_(width), height_(height), data_(std::move(data)) {
        check_shape();
        if (data_.size() != width_ * height_)
            throw ArgumentError("image data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(width_) + "x" +
                                std::to_string(height_));
        for (double v : data_) check_finite(v);
    }

    /// Single-row image, handy for 1D signals.
    static Image row(std::initializer_list<double> values) {
        return Image(values.size(), 1, std::vector<double>(values));
    }

    /// Build from nested rows; all rows must have the same length.
    static Image from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const std::size_t h = rows.size();
        const std::size_t w = h ? rows.begin()->size() : 0;
        std::vector<double> data;
        data.reserve(w * h);
        for (const auto& r : rows) {
            if (r.size() != w) throw ArgumentError("ragged rows");
            data.insert(data.end(), r.begin(), r.end());
        }
        return Image(w, h, std::move(data));
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    bool same_shape(const Image& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    double operator()(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }
    double& operator()(std::size_t x, std::size_t y) noexcept { return data_[y * width_ + x]; }

    double at(std::size_t x, std::size_t y) const {
        check_index(x, y);
        return (*this)(x, y);
    }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

    void check_index(std::size_t x, std::size_t y) const {
        if (x >= width_ || y >= height_)
            throw IndexError("pixel (" + std::to_string(x) + "," + std::to_string(y) +
                             ") outside " + std::to_string(width_) + "x" +
                             std::to_string(height_) + " image");
    }

    Image& operator+=(const Image& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Image& operator-=(const Image& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Image& operator*=(double c) noexcept {
        for (double& v : data_) v *= c;
        return *this;
    }

    friend Image operator+(Image a, const Image& b) { return a += b; }
    friend Image operator-(Image a, const Image& b) { return a -= b; }
    friend Image operator*(Image a, double c) { return a *= c; }
    friend Image operator*(double c, Image a) { return a *= c; }

    friend bool operator==(const Image&, const Image&) = default;

    void require_same_shape(const Image& o) const {
        if (!same_shape(o))
            throw ArgumentError("shape mismatch: " + std::to_string(width_) + "x" +
                                std::to_string(height_) + " vs " + std::to_string(o.width_) +
                                "x" + std::to_string(o.height_));
    }

private:
    void check_shape() const {
        if (width_ == 0 || height_ == 0) throw ArgumentError("image dimensions must be positive");
    }
    static void check_finite(double v) {
        if (!std::isfinite(v)) throw ArgumentError("image entries must be finite");
    }

    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

inline double dot(const Image& a, const Image& b) {
    a.require_same_shape(b);
    double s = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) s += da[i] * db[i];
    return s;
}

inline double squared_norm(const Image& a) { return dot(a, a); }

inline double squared_distance(const Image& a, const Image& b) {
    a.require_same_shape(b);
    double s = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = da[i] - db[i];
        s += d * d;
    }
    return s;
}

inline double mean(const Image& a) {
    double s = 0.0;
    for (double v : a) s += v;
    return s / static_cast<double>(a.size());
}

/**
 * Square blur kernel with an odd side length, anchored at its center tap.
 * Taps are stored row-major; tap(dx, dy) addresses offsets in [-radius, radius].
 */
class Kernel {
public:
    Kernel(std::size_t size, std::vector<double> taps) : size_(size), taps_(std::move(taps)) {
        if (size_ == 0 || size_ % 2 == 0)
            throw ArgumentError("kernel size must be odd and positive, got " +
                                std::to_string(size_));
        if (taps_.size() != size_ * size_)
            throw ArgumentError("kernel needs " + std::to_string(size_ * size_) + " taps, got " +
                                std::to_string(taps_.size()));
        for (double t : taps_) {
            if (!std::isfinite(t)) throw ArgumentError("kernel taps must be finite");
            sq_norm_ += t * t;
        }
        if (!(sq_norm_ > 0.0)) throw ArgumentError("kernel must have nonzero norm");
    }

    static Kernel delta() { return Kernel(1, {1.0}); }

    /// Normalized n x n box filter.
    static Kernel box(std::size_t n) {
        const double tap = 1.0 / static_cast<double>(n * n);
        return Kernel(n, std::vector<double>(n * n, tap));
    }

    std::size_t size() const noexcept { return size_; }
    std::ptrdiff_t radius() const noexcept { return static_cast<std::ptrdiff_t>(size_ / 2); }
    double sq_norm() const noexcept { return sq_norm_; }
    std::span<const double> taps() const noexcept { return taps_; }

    double tap(std::ptrdiff_t dx, std::ptrdiff_t dy) const noexcept {
        const auto r = radius();
        return taps_[static_cast<std::size_t>((dy + r) * static_cast<std::ptrdiff_t>(size_) +
                                              (dx + r))];
    }

    double tap_sum() const noexcept {
        double s = 0.0;
        for (double t : taps_) s += t;
        return s;
    }

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    std::size_t size_;
    std::vector<double> taps_;
    double sq_norm_ = 0.0;
};

/// A point (w, y) of the lifted space R^{N+1}.
struct LiftedVector {
    Image w;
    double y = 0.0;
};

inline LiftedVector lift(Image img, double y) {
    if (!std::isfinite(y)) throw ArgumentError("lifted coordinate must be finite");
    return LiftedVector{std::move(img), y};
}

inline double distance(const LiftedVector& a, const LiftedVector& b) {
    const double dy = a.y - b.y;
    return std::sqrt(squared_distance(a.w, b.w) + dy * dy);
}

/**
 * Blur response at pixel (x, y): sum of img(x + dx, y + dy) * tap(dx, dy) over
 * the kernel support, with neighbors outside the image treated as zero.
 * The kernel is stamped unflipped, the same orientation the row projections use.
 */
inline double convolve_at(const Image& img, const Kernel& k, std::size_t x, std::size_t y) {
    img.check_index(x, y);
    const auto r = k.radius();
    const auto w = static_cast<std::ptrdiff_t>(img.width());
    const auto h = static_cast<std::ptrdiff_t>(img.height());
    const auto cx = static_cast<std::ptrdiff_t>(x);
    const auto cy = static_cast<std::ptrdiff_t>(y);
    double s = 0.0;
    for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
        const auto py = cy + dy;
        if (py < 0 || py >= h) continue;
        for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
            const auto px = cx + dx;
            if (px < 0 || px >= w) continue;
            s += img(static_cast<std::size_t>(px), static_cast<std::size_t>(py)) * k.tap(dx, dy);
        }
    }
    return s;
}

inline Image convolve_full(const Image& img, const Kernel& k) {
    Image out(img.width(), img.height());
    for (std::size_t y = 0; y < img.height(); ++y)
        for (std::size_t x = 0; x < img.width(); ++x) out(x, y) = convolve_at(img, k, x, y);
    return out;
}

}  // namespace pesc
