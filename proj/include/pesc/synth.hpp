#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

#include "errors.hpp"
#include "image.hpp"
#include "metrics.hpp"

namespace pesc {

/**
 * Standard normal sampler with a pinned algorithm: 64-bit Mersenne Twister
 * words mapped to (0, 1] with 53-bit resolution, then the Box-Muller
 * transform. std::normal_distribution is implementation-defined and would
 * break cross-platform reproducibility.
 */
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double uniform() {
        constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
        return (static_cast<double>(engine_() >> 11) + 1.0) * scale;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct DegradationSpec {
    Kernel kernel;
    /// +infinity requests a noiseless observation.
    double target_bsnr_db;
    std::uint64_t seed = 0;
};

struct Degraded {
    Image z;
    Image z_tilde;
    double sigma;
};

/// Noise level that puts the blurred image z~ at the requested BSNR.
inline double calibrate_sigma(const Image& z_tilde, double target_bsnr_db) {
    if (std::isnan(target_bsnr_db)) throw ArgumentError("target BSNR must not be NaN");
    const double e = centered_energy(z_tilde);
    if (e == 0.0) throw DegenerateInputError("cannot calibrate noise for a constant image");
    if (target_bsnr_db == std::numeric_limits<double>::infinity()) return 0.0;
    const double n = static_cast<double>(z_tilde.size());
    return std::sqrt(e / (n * std::pow(10.0, target_bsnr_db / 10.0)));
}

/// z = w_orig * h + eta with eta ~ N(0, sigma^2) i.i.d., deterministic in the seed.
inline Degraded degrade(const Image& w_orig, const DegradationSpec& spec) {
    Image z_tilde = convolve_full(w_orig, spec.kernel);
    const double sigma = spec.target_bsnr_db == std::numeric_limits<double>::infinity()
                             ? 0.0
                             : calibrate_sigma(z_tilde, spec.target_bsnr_db);
    Image z = z_tilde;
    if (sigma > 0.0) {
        GaussianSampler noise(spec.seed);
        for (double& v : z.data()) v += sigma * noise();
    }
    return {std::move(z), std::move(z_tilde), sigma};
}

/// BSNR measured from the realized noise z - z~ (sample variance about its mean).
inline double empirical_bsnr(const Image& z_tilde, const Image& z) {
    const Image noise = z - z_tilde;
    const double var = centered_energy(noise) / static_cast<double>(noise.size());
    if (var == 0.0) return std::numeric_limits<double>::infinity();
    return bsnr(z_tilde, std::sqrt(var), z_tilde.size());
}

/**
 * Piecewise-constant test scene: dark background, two bright rectangles and
 * a mid-gray disk, laid out in fractions of the image size.
 */
inline Image make_test_scene(std::size_t width, std::size_t height) {
    Image img(width, height, 40.0);
    const double w = static_cast<double>(width);
    const double h = static_cast<double>(height);
    for (std::size_t y = 0; y < height; ++y) {
        const double fy = (static_cast<double>(y) + 0.5) / h;
        for (std::size_t x = 0; x < width; ++x) {
            const double fx = (static_cast<double>(x) + 0.5) / w;
            if (fy >= 0.15 && fy < 0.47 && fx >= 0.12 && fx < 0.62) img(x, y) = 200.0;
            if (fy >= 0.56 && fy < 0.90 && fx >= 0.31 && fx < 0.78) img(x, y) = 120.0;
            const double dx = fx - 0.75;
            const double dy = fy - 0.31;
            if (dx * dx + dy * dy < 0.0244) img(x, y) = 90.0;
        }
    }
    return img;
}

}  // namespace pesc
