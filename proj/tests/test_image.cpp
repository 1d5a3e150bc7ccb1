#include <gtest/gtest.h>

#include <random>

#include "pesc/image.hpp"

using namespace pesc;

TEST(Image, RejectsBadShapeAndNonFinite) {
    EXPECT_THROW(Image(0, 3), ArgumentError);
    EXPECT_THROW(Image(2, 2, std::vector<double>{1, 2, 3}), ArgumentError);
    EXPECT_THROW(Image(1, 1, std::vector<double>{std::nan("")}), ArgumentError);
}

TEST(Kernel, Invariants) {
    EXPECT_THROW(Kernel(2, std::vector<double>(4, 1.0)), ArgumentError);
    EXPECT_THROW(Kernel(3, std::vector<double>(9, 0.0)), ArgumentError);
    EXPECT_THROW(Kernel(3, std::vector<double>(8, 1.0)), ArgumentError);
    const Kernel k(3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    EXPECT_NEAR(k.sq_norm(), 285.0, 285.0 * 1e-12);
    EXPECT_EQ(k.tap(-1, -1), 1.0);
    EXPECT_EQ(k.tap(1, 0), 6.0);
    EXPECT_EQ(k.tap(0, 1), 8.0);
}

TEST(ConvolveAt, DeltaKernelIsIdentity) {
    const Image img = Image::from_rows({{1.5, -2.25}, {3.125, 7}});
    for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t x = 0; x < 2; ++x)
            EXPECT_EQ(convolve_at(img, Kernel::delta(), x, y), img(x, y));
    EXPECT_EQ(convolve_full(img, Kernel::delta()), img);
}

TEST(ConvolveAt, ZeroImageGivesZero) {
    EXPECT_EQ(convolve_at(Image(4, 4), Kernel::box(3), 1, 2), 0.0);
}

TEST(ConvolveAt, BoxOnOnesWithZeroPadding) {
    const Image ones(3, 3, 1.0);
    const Kernel box = Kernel::box(3);
    EXPECT_NEAR(convolve_at(ones, box, 1, 1), 1.0, 1e-15);
    EXPECT_NEAR(convolve_at(ones, box, 0, 0), 4.0 / 9.0, 1e-15);
    EXPECT_NEAR(convolve_at(ones, box, 2, 1), 6.0 / 9.0, 1e-15);
}

TEST(ConvolveAt, OutOfRangeIsIndexError) {
    EXPECT_THROW(convolve_at(Image(3, 3), Kernel::box(3), 3, 0), IndexError);
    EXPECT_THROW(convolve_at(Image(3, 3), Kernel::box(3), 0, 5), IndexError);
}

TEST(ConvolveFull, ScalarKernelScales) {
    const Image img = Image::row({0, 2, 1});
    EXPECT_EQ(convolve_full(img, Kernel(1, {2.0})), Image::row({0, 4, 2}));
}

TEST(ConvolveFull, ConstantResponseInInterior) {
    const Image c(7, 7, 3.0);
    const Kernel k(3, {0.1, 0.2, 0.1, 0.0, 0.5, 0.3, -0.2, 0.4, 0.1});
    const Image out = convolve_full(c, k);
    for (std::size_t y = 1; y < 6; ++y)
        for (std::size_t x = 1; x < 6; ++x) EXPECT_NEAR(out(x, y), 3.0 * k.tap_sum(), 1e-12);
}

TEST(ConvolveFull, Linearity) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 50; ++trial) {
        Image u(5, 4), v(5, 4);
        for (double& x : u.data()) x = n(rng);
        for (double& x : v.data()) x = n(rng);
        std::vector<double> taps(9);
        for (double& t : taps) t = n(rng);
        const Kernel k(3, taps);
        const double a = n(rng), b = n(rng);
        const Image lhs = convolve_full(u * a + v * b, k);
        const Image rhs = convolve_full(u, k) * a + convolve_full(v, k) * b;
        for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_NEAR(lhs.data()[i], rhs.data()[i], 1e-10);
    }
}

TEST(Lift, EmbedsAndDrops) {
    const Image img = Image::row({1, 2, 3});
    const LiftedVector v = lift(img, 0.0);
    EXPECT_EQ(v.y, 0.0);
    EXPECT_EQ(v.w, img);
    EXPECT_THROW(lift(img, std::numeric_limits<double>::infinity()), ArgumentError);
}

TEST(Lift, DistanceIncludesLastCoordinate) {
    const LiftedVector a{Image::row({0, 0}), 0.0};
    const LiftedVector b{Image::row({3, 0}), 4.0};
    EXPECT_DOUBLE_EQ(distance(a, b), 5.0);
}
