#include <gtest/gtest.h>

#include <limits>

#include "pesc/synth.hpp"

using namespace pesc;

TEST(CalibrateSigma, ZeroDbInvertsUnitRatio) {
    const Image z = Image::row({1, 4, 2, 9});
    EXPECT_NEAR(calibrate_sigma(z, 0.0) * calibrate_sigma(z, 0.0), centered_energy(z) / 4.0, 1e-12);
}

TEST(CalibrateSigma, FortyDbWithUnitPower) {
    const Image z = Image::row({-1, 1});  // centered energy / N = 1
    EXPECT_NEAR(calibrate_sigma(z, 40.0), 1e-2, 1e-15);
}

TEST(CalibrateSigma, RoundTripOnTableGrid) {
    GaussianSampler g(4);
    for (int trial = 0; trial < 20; ++trial) {
        Image z(9, 7);
        for (double& v : z.data()) v = 100.0 * g();
        for (double target : {30.0, 35.0, 40.0, 45.0, 50.0})
            EXPECT_NEAR(bsnr(z, calibrate_sigma(z, target), z.size()), target, 1e-9);
    }
}

TEST(CalibrateSigma, ConstantIsDegenerate) {
    EXPECT_THROW(calibrate_sigma(Image(4, 4, 2.0), 30.0), DegenerateInputError);
}

TEST(Degrade, NoiselessSentinel) {
    const Image w = make_test_scene(16, 16);
    const auto d = degrade(w, {Kernel::box(3), std::numeric_limits<double>::infinity(), 1});
    EXPECT_EQ(d.sigma, 0.0);
    EXPECT_EQ(d.z, convolve_full(w, Kernel::box(3)));
}

TEST(Degrade, DeterministicInSeed) {
    const Image w = make_test_scene(32, 32);
    const DegradationSpec spec{Kernel::box(3), 35.0, 1234};
    EXPECT_EQ(degrade(w, spec).z, degrade(w, spec).z);
    EXPECT_NE(degrade(w, spec).z, degrade(w, {Kernel::box(3), 35.0, 1235}).z);
}

TEST(Degrade, NoiseVarianceMatchesSigma) {
    const Image w = make_test_scene(256, 256);
    const auto d = degrade(w, {Kernel::box(3), 30.0, 99});
    const Image noise = d.z - d.z_tilde;
    const double var = centered_energy(noise) / static_cast<double>(noise.size());
    EXPECT_NEAR(var, d.sigma * d.sigma, 0.05 * d.sigma * d.sigma);
}

TEST(Degrade, EmpiricalBsnrNearTarget) {
    const Image w = make_test_scene(128, 128);
    for (double target : {30.0, 40.0, 50.0}) {
        const auto d = degrade(w, {Kernel::box(3), target, 5});
        EXPECT_NEAR(empirical_bsnr(d.z_tilde, d.z), target, 0.2);
    }
}

TEST(GaussianSampler, PinnedStream) {
    GaussianSampler a(42), b(42);
    double mean = 0.0, sq = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = a();
        EXPECT_EQ(x, b());
        mean += x;
        sq += x * x;
    }
    EXPECT_NEAR(mean / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.01);
}
