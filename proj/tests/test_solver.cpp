#include <gtest/gtest.h>

#include "pesc/solver.hpp"
#include "pesc/synth.hpp"

using namespace pesc;

TEST(Deconvolve, ConstantObservationIsFixedPoint) {
    const Image z(8, 8, 77.0);
    SolverConfig cfg;
    cfg.outer_iters = 1;
    cfg.epigraph.eps = 1e3;
    const auto r = deconvolve(z, Kernel::delta(), cfg);
    EXPECT_EQ(r.restored, z);
}

TEST(Deconvolve, NoiselessBlurOfConstantRecovered) {
    const Image w(12, 10, 50.0);
    const Kernel k = Kernel::box(3);
    SolverConfig cfg;
    cfg.outer_iters = 200;
    auto r = deconvolve(convolve_full(w, k), k, cfg);
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(r.restored.data()[i], 50.0, 1e-5);
    cfg.outer_iters = 50;
    cfg.epigraph.bundle_size = 0;
    r = deconvolve(convolve_full(w, k), k, cfg);
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(r.restored.data()[i], 50.0, 1e-7);
}

TEST(Deconvolve, ShapeMismatchAndConfigErrors) {
    const Image z(8, 8, 1.0);
    EXPECT_THROW(deconvolve(z, Kernel::box(3), SolverConfig{}, Image(7, 8)), ArgumentError);
    SolverConfig cfg;
    cfg.outer_iters = 0;
    EXPECT_THROW(deconvolve(z, Kernel::box(3), cfg), ArgumentError);
    cfg = {};
    cfg.use_slabs = true;
    EXPECT_THROW(deconvolve(z, Kernel::box(3), cfg), ConfigError);
}

class SolverScene : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        truth_ = new Image(make_test_scene(32, 32));
        deg_ = new Degraded(degrade(*truth_, {Kernel::box(3), 40.0, 2024}));
        SolverConfig cfg;
        cfg.outer_iters = 4;
        cfg.epigraph.max_iters = 40;
        res_ = new DeconvolutionResult(deconvolve(deg_->z, Kernel::box(3), cfg, *truth_));
    }
    static void TearDownTestSuite() {
        delete res_;
        delete deg_;
        delete truth_;
    }
    static Image* truth_;
    static Degraded* deg_;
    static DeconvolutionResult* res_;
};
Image* SolverScene::truth_ = nullptr;
Degraded* SolverScene::deg_ = nullptr;
DeconvolutionResult* SolverScene::res_ = nullptr;

TEST_F(SolverScene, TraceShapes) {
    const auto& t = res_->trace;
    ASSERT_EQ(t.outer.size(), 4u);
    std::size_t rows = 0;
    for (const auto& o : t.outer) {
        EXPECT_GE(o.inner_iterations, 1u);
        rows += o.inner_iterations;
        ASSERT_TRUE(o.isnr_db.has_value());
        EXPECT_TRUE(std::isfinite(*o.isnr_db));
    }
    EXPECT_EQ(t.rows.size(), rows);
    for (const auto& r : t.rows) ASSERT_TRUE(r.isnr_db.has_value());
}

TEST_F(SolverScene, SweepNeverIncreasesResidual) {
    for (const auto& o : res_->trace.outer)
        EXPECT_LE(o.residual_after_sweep, o.residual_before_sweep + 1e-9);
}

TEST(Deconvolve, ExactProjectionNeverIncreasesCost) {
    const Image truth = make_test_scene(24, 24);
    const auto d = degrade(truth, {Kernel::box(3), 35.0, 8});
    SolverConfig cfg;
    cfg.outer_iters = 3;
    cfg.epigraph.bundle_size = 0;
    cfg.epigraph.max_iters = 100;
    const auto r = deconvolve(d.z, Kernel::box(3), cfg);
    for (const auto& o : r.trace.outer) EXPECT_LE(o.cost_after_epigraph, o.cost_before_epigraph + 1e-6);
}

TEST_F(SolverScene, ImprovesOnObservation) {
    EXPECT_GT(isnr(deg_->z, res_->restored, *truth_), 0.0);
}

TEST_F(SolverScene, Deterministic) {
    SolverConfig cfg;
    cfg.outer_iters = 4;
    cfg.epigraph.max_iters = 40;
    const auto again = deconvolve(deg_->z, Kernel::box(3), cfg, *truth_);
    EXPECT_EQ(again.restored, res_->restored);
    EXPECT_EQ(again.trace.rows, res_->trace.rows);
}

TEST_F(SolverScene, SlabVariantRuns) {
    SolverConfig cfg;
    cfg.outer_iters = 2;
    cfg.epigraph.max_iters = 20;
    cfg.use_slabs = true;
    cfg.slab_eps = deg_->sigma;
    const auto r = deconvolve(deg_->z, Kernel::box(3), cfg, *truth_);
    EXPECT_TRUE(r.restored.all_finite());
}

TEST(TraceRows, EmptyTraceIsHeaderOnly) {
    const auto lines = trace_to_rows({});
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0], kTraceHeader);
}

TEST(TraceRows, OneRowPerInnerStep) {
    const Image w = make_test_scene(16, 16);
    const auto d = degrade(w, {Kernel::box(3), 30.0, 3});
    SolverConfig cfg;
    cfg.outer_iters = 1;
    cfg.epigraph.max_iters = 3;
    const auto r = deconvolve(d.z, Kernel::box(3), cfg);
    EXPECT_EQ(trace_to_rows(r.trace).size(), 1u + r.trace.outer[0].inner_iterations);
    EXPECT_EQ(r.trace.outer[0].inner_iterations, 3u);
    EXPECT_EQ(trace_to_rows(r.trace)[1].back(), ',');  // no ground truth, empty isnr
}

TEST(TraceRows, RoundTrip) {
    ConvergenceTrace t;
    t.rows.push_back({1, 1, 1.0 / 3.0, 2e-17, 12345.678901234567, -0.1});
    t.rows.push_back({1, 2, 0.1, 0.2, 0.3, std::nullopt});
    t.rows.push_back({2, 1, 3.141592653589793, 1e300, 0.0, std::numeric_limits<double>::infinity()});
    const auto back = parse_trace_rows(trace_to_rows(t));
    ASSERT_EQ(back.size(), t.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i], t.rows[i]);
    EXPECT_THROW(parse_trace_rows({"bad header"}), FormatError);
}
