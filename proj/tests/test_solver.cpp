#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "degenflow/solver.hpp"

using namespace degenflow;

namespace {

GridSpec unit(int n1, int n2) { return GridSpec{n1, n2, {0.0, 1.0}, {0.0, 1.0}}; }

ProblemSpec bump_problem(double amp = 0.4, double c1 = 0.5, double c2 = 0.5)
{
    ProblemSpec spec = make_problem(ModelFamily{}, 0.0, 1.0);
    spec.u0.kind = InitialData::Kind::Bump;
    spec.u0.amp = amp;
    spec.u0.radius = 0.3;
    spec.u0.c1 = c1;
    spec.u0.c2 = c2;
    return spec;
}

SolverConfig config(double eps, double t_end)
{
    SolverConfig c;
    c.eps = eps;
    c.t_end = t_end;
    return c;
}

// Random smooth datum in [0, 1]: a bump of random sign, size and place.
InitialData random_bump(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    InitialData d;
    d.kind = InitialData::Kind::Bump;
    d.base = 0.2 + 0.6 * u01(rng);
    const double room = std::min(d.base, 1.0 - d.base);
    d.amp = (2.0 * u01(rng) - 1.0) * room;
    d.c1 = 0.2 + 0.6 * u01(rng);
    d.c2 = 0.2 + 0.6 * u01(rng);
    d.radius = 0.1 + 0.3 * u01(rng);
    return d;
}

}  // namespace

TEST(Solver, LaxFriedrichsFaceFluxes)
{
    const ProblemSpec spec = make_problem(ModelFamily{}, 0.0, 1.0);
    const Grid grid(unit(10, 10));
    const FluxScheme plain(spec, grid, 0.0);
    EXPECT_DOUBLE_EQ(plain.alpha1(), 1.0);
    EXPECT_DOUBLE_EQ(plain.alpha2(), 0.0);
    // 0.5 (0.16 + 0.24) - 0.5 * 1 * 0.4
    EXPECT_NEAR(plain.x1(0.2, 0.6), 0.0, 1e-15);
    EXPECT_NEAR(plain.x1(0.6, 0.2), 0.4, 1e-15);
    // -(b22(0.6) - b22(0.2)) / dx2 with b22 = u^3 / 3
    EXPECT_NEAR(plain.x2(0.2, 0.6), -(0.216 - 0.008) / 3.0 / 0.1, 1e-14);
    const FluxScheme viscous(spec, grid, 0.01);
    EXPECT_NEAR(viscous.x1(0.2, 0.6), -0.01 * 0.4 / 0.1, 1e-15);
}

TEST(Solver, StableStepFromSpeedAndDiffusivity)
{
    const ProblemSpec spec = make_problem(ModelFamily{}, 0.0, 1.0);
    const Grid grid(unit(10, 10));
    // min(h / 1, h^2 / (2 (1 + 2 eps))) * cfl
    EXPECT_NEAR(stable_dt(spec, grid, config(0.01, 1.0)), 0.4 * 0.01 / 2.04, 1e-17);
    SolverConfig bad = config(0.01, 1.0);
    bad.cfl = 1.5;
    EXPECT_THROW(stable_dt(spec, grid, bad), Error);
}

TEST(Solver, DirichletGhostEvaluatesBoundaryData)
{
    ProblemSpec spec = make_problem(ModelFamily{}, 0.0, 1.0);
    spec.a0 = BoundaryData{0.5, 0.2, 0.0, 0.1};
    const Grid grid(unit(4, 4));
    EXPECT_NEAR(dirichlet_ghost(spec, grid, 1, -1), 0.5 + 0.2 * 0.375, 1e-15);
    EXPECT_NEAR(dirichlet_ghost(spec, grid, 1, +1), 0.5 + 0.2 * 0.375 + 0.1, 1e-15);
}

TEST(Solver, ConstantStateWithoutHyperbolicFluxIsSteady)
{
    ModelFamily fam;
    fam.f1_scale = 0.0;
    ProblemSpec spec = make_problem(fam, 0.0, 1.0);
    const RunArtifacts r = run(spec, Grid(unit(12, 12)), config(1e-3, 0.05));
    for (double v : r.final_snapshot().u.values()) {
        EXPECT_DOUBLE_EQ(v, 0.5);
    }
}

TEST(Solver, MassBalanceMatchesBoundaryOutflow)
{
    const RunArtifacts r = run(bump_problem(), Grid(unit(16, 16)), config(1e-3, 0.05));
    double out = 0.0;
    for (std::size_t n = 1; n < r.diagnostics.size(); ++n) {
        EXPECT_EQ(r.diagnostics[n].gamma1_outflow, 0.0);
        out += r.diagnostics[n].gamma2_outflow;
    }
    EXPECT_NEAR(r.diagnostics.back().mass - r.diagnostics.front().mass, -out, 1e-13);
}

TEST(Solver, SnapshotsLandOnRequestedTimes)
{
    SolverConfig c = config(1e-3, 0.05);
    c.snapshot_times = {0.02, 0.01, 0.02};
    const RunArtifacts r = run(bump_problem(), Grid(unit(8, 8)), c);
    ASSERT_EQ(r.snapshots.size(), 4u);
    EXPECT_EQ(r.snapshots[0].t, 0.0);
    EXPECT_EQ(r.snapshots[1].t, 0.01);
    EXPECT_EQ(r.snapshots[2].t, 0.02);
    EXPECT_EQ(r.snapshots[3].t, 0.05);
}

TEST(Solver, TrajectoryIsKeptOnRequest)
{
    SolverConfig c = config(1e-3, 0.02);
    c.keep_trajectory = true;
    const RunArtifacts r = run(bump_problem(), Grid(unit(8, 8)), c);
    EXPECT_EQ(r.trajectory.size(), r.dt_history.size() + 1);
    EXPECT_EQ(r.trajectory.back(), r.final_snapshot().u);
}

TEST(Solver, RunsAreBitReproducible)
{
    const Grid grid(unit(16, 16));
    const RunArtifacts a = run(bump_problem(), grid, config(1e-3, 0.05));
    const RunArtifacts b = run(bump_problem(), grid, config(1e-3, 0.05));
    EXPECT_EQ(a.final_snapshot().u, b.final_snapshot().u);
    EXPECT_EQ(a.dt_history, b.dt_history);
}

TEST(Solver, ViscosityContinuationTable)
{
    const Grid grid(unit(8, 8));
    const ContinuationTable t = viscosity_continuation(bump_problem(), grid, config(0.0, 0.02), {0.1, 0.05, 0.025});
    EXPECT_EQ(t.eps.size(), 3u);
    EXPECT_EQ(t.pairwise_l1.size(), 2u);
    EXPECT_NEAR(t.pairwise_l1[0], l1_norm(t.finals[0], t.finals[1], grid), 1e-15);
    EXPECT_THROW(viscosity_continuation(bump_problem(), grid, config(0.0, 0.02), {0.05, 0.1}), Error);
}

TEST(SolverProperty, StepIsMonotoneAtTheStableStep)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const ProblemSpec spec = make_problem(ModelFamily{}, 0.0, 1.0);
    const Grid grid(unit(8, 8));
    const SolverConfig c = config(1e-3, 1.0);
    const double dt = stable_dt(spec, grid, c);
    for (int trial = 0; trial < 50; ++trial) {
        Field u = grid.make_field();
        for (std::size_t k = 0; k < u.size(); ++k) {
            u[k] = u01(rng);
        }
        Field v = u;
        const std::size_t bumped = static_cast<std::size_t>(u01(rng) * static_cast<double>(u.size())) % u.size();
        v[bumped] = std::min(1.0, v[bumped] + 0.1);
        const Field a = step(u, spec, grid, c, dt).next;
        const Field b = step(v, spec, grid, c, dt).next;
        for (std::size_t k = 0; k < u.size(); ++k) {
            EXPECT_GE(b[k], a[k] - 1e-15);
        }
    }
}

TEST(SolverProperty, MaximumPrincipleForRandomData)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const Grid grid(unit(16, 16));
    for (int trial = 0; trial < 8; ++trial) {
        ProblemSpec spec = make_problem(ModelFamily{}, 0.0, 1.0);
        spec.u0 = random_bump(rng);
        spec.a0.c0 = 0.1 + 0.8 * u01(rng);
        const RunArtifacts r = run(spec, grid, config(std::pow(10.0, -1.0 - 3.0 * u01(rng)), 0.1));
        for (const auto& d : r.diagnostics) {
            EXPECT_GE(d.min, -1e-12);
            EXPECT_LE(d.max, 1.0 + 1e-12);
        }
    }
}

TEST(SolverProperty, OrderPreservationAndContraction)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const Grid grid(unit(16, 16));
    for (int trial = 0; trial < 6; ++trial) {
        ProblemSpec lower = make_problem(ModelFamily{}, 0.0, 1.0);
        lower.u0 = random_bump(rng);
        lower.u0.amp = std::abs(lower.u0.amp);
        ProblemSpec upper = lower;
        upper.u0.amp += u01(rng) * (1.0 - lower.u0.base - lower.u0.amp);
        SolverConfig c = config(1e-3, 0.1);
        c.keep_trajectory = true;
        const RunArtifacts a = run(lower, grid, c);
        const RunArtifacts b = run(upper, grid, c);
        ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
        double prev = l1_norm(a.trajectory[0], b.trajectory[0], grid);
        for (std::size_t n = 1; n < a.trajectory.size(); ++n) {
            const double gap = l1_norm(a.trajectory[n], b.trajectory[n], grid);
            EXPECT_LE(gap, prev * (1.0 + 1e-10) + 1e-300);
            prev = gap;
            for (std::size_t k = 0; k < a.trajectory[n].size(); ++k) {
                ASSERT_LE(a.trajectory[n][k], b.trajectory[n][k] + 1e-15);
            }
        }
    }
}
