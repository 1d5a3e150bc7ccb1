#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "errors.hpp"
#include "image.hpp"

namespace pesc {

// Degenerate ratios are reported as +/-infinity rather than thrown.

/// 10 log10(x / y) with the zero cases mapped to +/-inf.
inline double ratio_db(double num, double den) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (den == 0.0) return num == 0.0 ? 0.0 : inf;
    if (num == 0.0) return -inf;
    return 10.0 * std::log10(num / den);
}

/// Sum of squared deviations from the pixel mean.
inline double centered_energy(const Image& img) {
    const double m = mean(img);
    double s = 0.0;
    for (double v : img) s += (v - m) * (v - m);
    return s;
}

/**
 * Blurred signal-to-noise ratio, 10 log10(||z~ - mean(z~)||^2 / (N sigma^2)),
 * where z~ is the noiseless blurred image. Constant z~ gives -inf.
 */
inline double bsnr(const Image& z_tilde, double sigma, std::size_t n_pixels) {
    if (!(sigma > 0.0)) throw ArgumentError("bsnr needs sigma > 0");
    if (n_pixels == 0) throw ArgumentError("bsnr needs a positive pixel count");
    const double e = centered_energy(z_tilde);
    if (e == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(e / (static_cast<double>(n_pixels) * sigma * sigma));
}

/// Improvement in SNR of w_rec over the degraded z, relative to w_orig.
inline double isnr(const Image& z, const Image& w_rec, const Image& w_orig) {
    z.require_same_shape(w_orig);
    w_rec.require_same_shape(w_orig);
    return ratio_db(squared_distance(z, w_orig), squared_distance(w_rec, w_orig));
}

/// 10 log10(||w_orig||^2 / ||w_rec - w_orig||^2).
inline double snr(const Image& w_rec, const Image& w_orig) {
    w_rec.require_same_shape(w_orig);
    return ratio_db(squared_norm(w_orig), squared_distance(w_rec, w_orig));
}

struct QualityReport {
    double bsnr_db;
    double isnr_db;
    double snr_db;
};

inline QualityReport quality_report(const Image& w_orig, const Image& z_tilde, double sigma,
                                    const Image& z, const Image& w_rec) {
    return {bsnr(z_tilde, sigma, z_tilde.size()), isnr(z, w_rec, w_orig), snr(w_rec, w_orig)};
}

}  // namespace pesc
