#include <gtest/gtest.h>

#include "degenflow/trace.hpp"

using namespace degenflow;

namespace {

GridSpec unit(int n1, int n2) { return GridSpec{n1, n2, {0.0, 1.0}, {0.0, 1.0}}; }

const PointField radial = [](double a, double b) { return std::array<double, 2>{a, b}; };
const SmoothFn g_x1{[](double a, double) { return a; }, [](double, double) { return std::array<double, 2>{1.0, 0.0}; }};
const SmoothFn g_one{[](double, double) { return 1.0; }, [](double, double) { return std::array<double, 2>{0.0, 0.0}; }};

RunArtifacts small_run(bool symmetric)
{
    ModelFamily fam;
    if (symmetric) {
        fam.f1_scale = 0.0;
    }
    ProblemSpec spec = make_problem(fam, 0.0, 1.0);
    spec.u0.kind = symmetric ? InitialData::Kind::BumpX2 : InitialData::Kind::Bump;
    spec.u0.amp = 0.4;
    spec.u0.radius = 0.3;
    SolverConfig c;
    c.eps = 1e-3;
    c.t_end = 0.1;
    c.keep_trajectory = true;
    return run(spec, Grid(unit(32, 32)), c);
}

}  // namespace

TEST(GaussGreen, RadialFieldAgainstX1)
{
    // Volume side: int x1 + int 2 x1 = 3/2, exact for linear data. The face
    // side takes the adjacent cell's normal component, which is off by h/2
    // on the x1 = 1 and x2 = 0 faces: pairing = 3/2 - h.
    for (int n : {32, 64}) {
        const Grid grid(unit(n, n));
        const GaussGreenResult r = gauss_green_check(sample_vector_field(radial, grid), g_x1, grid);
        EXPECT_NEAR(r.volume_grad, 0.5, 1e-13);
        EXPECT_NEAR(r.volume_div, 1.0, 1e-13);
        EXPECT_NEAR(r.pairing, 1.5 - 1.0 / n, 1e-13);
        EXPECT_NEAR(r.residual, 1.0 / n, 1e-13);
    }
}

TEST(GaussGreen, FirstOrderRefinement)
{
    const GaussGreenRefinement r = gauss_green_refinement(radial, g_x1, unit(32, 32));
    EXPECT_NEAR(r.ratio, 2.0, 1e-10);
}

TEST(GaussGreen, BoundaryLayerTraceOfUnitOutflow)
{
    // F = (x1, 0), g = 1: the normal trace integrates to 1 (only x1 = 1 carries flux).
    const PointField F = [](double a, double) { return std::array<double, 2>{a, 0.0}; };
    const Grid grid(unit(64, 64));
    const double h = grid.dx1();
    const VectorField field = sample_vector_field(F, grid);
    const BoundaryTraceEstimate est = boundary_layer_trace(field, g_one, grid, {4 * h, 3 * h, 2 * h, h});
    ASSERT_EQ(est.values.size(), 4u);
    const double norm = gauss_green_check(field, g_one, grid).field_norm;
    EXPECT_NEAR(est.limit, 1.0, 2.0 * h * norm);
    EXPECT_THROW(boundary_layer_trace(field, g_one, grid, {h, 2 * h}), Error);
    EXPECT_THROW(boundary_layer_trace(field, g_one, grid, {1.5 * h}), Error);
}

TEST(TraceProfile, GapsDecreasingWithNoise)
{
    EXPECT_TRUE(gaps_decreasing({3.0, 2.0, 1.0}));
    EXPECT_TRUE(gaps_decreasing({1.0, 1.05}, 0.1));
    EXPECT_FALSE(gaps_decreasing({1.0, 1.2}, 0.1));
}

TEST(TraceProfile, RejectsBadDepthLists)
{
    const RunArtifacts r = small_run(true);
    const double dx = 1.0 / 32;
    EXPECT_THROW(extract_trace_profile(r, {3 * dx}), Error);
    EXPECT_THROW(extract_trace_profile(r, {2 * dx, 3 * dx}), Error);
    EXPECT_THROW(extract_trace_profile(r, {3 * dx, 0.25 * dx}), Error);
    EXPECT_THROW(extract_trace_profile(r, {3.2 * dx, 3.1 * dx}), Error);
}

TEST(TraceProfile, XPrimeInvariantRunHasIdenticalLayers)
{
    const RunArtifacts r = small_run(true);
    const double dx = 1.0 / 32;
    const TraceProfile p = extract_trace_profile(r, {6 * dx, 4.5 * dx, 3 * dx, 1.5 * dx});
    ASSERT_EQ(p.l1_gaps.size(), 3u);
    for (double gap : p.l1_gaps) {
        EXPECT_LE(gap, 1e-12);
    }
    EXPECT_EQ(p.u_tau.size(), p.times.size());
    EXPECT_TRUE(check_trace_profile(p).all_pass());
}

TEST(TimeTrace, BumpRunRecoversTheInitialDatum)
{
    const RunArtifacts r = small_run(false);
    const VerificationReport rep = check_time_zero_trace(r, spread_levels(r.spec, 5));
    EXPECT_TRUE(rep.all_pass());
    EXPECT_NE(rep.find("trace.time0.identity"), nullptr);
}
