#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "degenflow/model.hpp"

using namespace degenflow;

namespace {

ProblemSpec pinned_unit()
{
    return make_problem(ModelFamily{}, 0.0, 1.0);
}

ProblemSpec tadmor(int ell, int n)
{
    ModelFamily fam;
    fam.kind = ModelFamily::Kind::TadmorTao;
    fam.ell = ell;
    fam.n = n;
    return make_problem(fam, -1.0, 1.0);
}

}  // namespace

TEST(Model, BumpProfileIsEvenAndCompact)
{
    EXPECT_DOUBLE_EQ(bump_profile(0.0), 1.0);
    EXPECT_DOUBLE_EQ(bump_profile(0.5), 0.421875);  // (3/4)^3
    EXPECT_DOUBLE_EQ(bump_profile(-0.5), 0.421875);
    EXPECT_DOUBLE_EQ(bump_profile(1.0), 0.0);
    EXPECT_DOUBLE_EQ(bump_profile(-3.0), 0.0);
}

TEST(Model, PinnedFamilyFluxAndDiffusion)
{
    const ProblemSpec spec = pinned_unit();
    EXPECT_NEAR(spec.flux_f1(0.3), 0.21, 1e-15);
    EXPECT_NEAR(spec.flux_f1.d1(0.3), 0.4, 1e-15);
    EXPECT_DOUBLE_EQ(spec.flux_f1(0.0), 0.0);
    EXPECT_DOUBLE_EQ(spec.flux_f1(1.0), 0.0);
    EXPECT_NEAR(spec.diff_b22(0.5), 0.125 / 3.0, 1e-15);
    EXPECT_NEAR(spec.diff_b22.d1(0.5), 0.25, 1e-15);
    EXPECT_TRUE(spec.flux_f2.is_zero());
}

TEST(Model, TadmorTaoFlux)
{
    const ProblemSpec spec = tadmor(1, 2);
    EXPECT_NEAR(spec.flux_f1(-0.6), 0.18, 1e-15);
    EXPECT_NEAR(spec.flux_f1.d1(-0.6), -0.6, 1e-15);
    EXPECT_NEAR(spec.diff_b22(-0.5), -0.125 / 3.0, 1e-15);
}

TEST(Model, TadmorTaoRequiresDiffusionExponentAtLeastTwiceEll)
{
    try {
        tadmor(2, 1);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("tadmor_tao requires n >= 2*ell"), std::string::npos);
    }
    EXPECT_NO_THROW(tadmor(2, 4));
}

TEST(Model, ZeroScaleRemovesTheHyperbolicFlux)
{
    ModelFamily fam;
    fam.f1_scale = 0.0;
    EXPECT_TRUE(make_problem(fam, 0.0, 1.0).flux_f1.is_zero());
}

TEST(Model, MaxAbsDerivative)
{
    EXPECT_NEAR(max_abs_derivative(pinned_unit().flux_f1, 0.0, 1.0), 1.0, 1e-12);
    EXPECT_NEAR(max_abs_derivative(tadmor(1, 2).flux_f1, -1.0, 1.0), 1.0, 1e-12);
}

TEST(Model, EllipticityHoldsForBothFamilies)
{
    EXPECT_TRUE(validate_ellipticity(pinned_unit(), 1001).pass);
    EXPECT_TRUE(validate_ellipticity(tadmor(1, 2), 1001).pass);
}

TEST(Model, EllipticityCatchesOversizedDiffusion)
{
    ProblemSpec spec = pinned_unit();
    spec.diff_b22 = ScalarFn::signed_power(3.0, 2.0);  // b22' = 3 u^2 > lambda b'^2
    EXPECT_FALSE(validate_ellipticity(spec, 101).pass);
}

TEST(Model, PinningOnlyForThePinnedFamily)
{
    EXPECT_TRUE(validate_flux_pinning(pinned_unit()).pass);
    EXPECT_FALSE(validate_flux_pinning(tadmor(1, 2)).pass);
}

TEST(Model, DegenerateFractionAlongTheDiffusiveAxis)
{
    // tau = kappa1 = 0, kappa2 = 1: the symbol is u^4, below thr iff |u| < thr^(1/4).
    const ProblemSpec spec = tadmor(1, 2);
    const SymbolDirection dir{0.0, 0.0, 1.0};
    for (double thr : {1e-4, 1e-5, 1e-6}) {
        EXPECT_NEAR(degenerate_fraction(spec, dir, 20000, thr), std::pow(thr, 0.25), 1e-4) << thr;
    }
    EXPECT_DOUBLE_EQ(degenerate_fraction(spec, SymbolDirection{1.0, 0.0, 0.0}, 2000, 1e-4), 0.0);
}

TEST(Model, NondegeneracyScanReportsTheWorstDirection)
{
    const NondegeneracyReport rep = nondegeneracy_scan(tadmor(1, 2), 200, 20000, 1e-4);
    // Axis directions are scanned on top of the requested sphere points.
    EXPECT_GE(rep.fractions.size(), 200u);
    EXPECT_EQ(rep.fractions.size(), rep.directions.size());
    EXPECT_NEAR(rep.max_fraction, 0.1, 1e-4);
    for (double f : rep.fractions) {
        EXPECT_LE(f, rep.max_fraction);
    }
}

TEST(Model, InitialDataKinds)
{
    InitialData bump;
    bump.kind = InitialData::Kind::Bump;
    bump.amp = 0.4;
    bump.radius = 0.3;
    EXPECT_DOUBLE_EQ(bump(0.5, 0.5), 0.9);
    EXPECT_NEAR(bump(0.5, 0.65), 0.5 + 0.4 * 0.421875, 1e-15);
    EXPECT_DOUBLE_EQ(bump(0.9, 0.5), 0.5);

    InitialData step;
    step.kind = InitialData::Kind::StepX1;
    step.split = 0.25;
    step.left = 1.0;
    EXPECT_DOUBLE_EQ(step(0.2, 0.7), 1.0);
    EXPECT_DOUBLE_EQ(step(0.3, 0.7), 0.0);
}

TEST(Model, ValidateDataRejectsOutOfRangeValues)
{
    ProblemSpec spec = pinned_unit();
    spec.u0.kind = InitialData::Kind::Bump;
    spec.u0.amp = 0.7;
    EXPECT_THROW(validate_data(spec, GridSpec{16, 16, {0.0, 1.0}, {0.0, 1.0}}), Error);
    spec.u0.amp = 0.4;
    spec.a0.c1 = 0.8;
    EXPECT_THROW(validate_data(spec, GridSpec{16, 16, {0.0, 1.0}, {0.0, 1.0}}), Error);
    spec.a0.c1 = 0.2;
    EXPECT_NO_THROW(validate_data(spec, GridSpec{16, 16, {0.0, 1.0}, {0.0, 1.0}}));
}

TEST(Model, StructureChecks)
{
    ProblemSpec spec = pinned_unit();
    EXPECT_TRUE(check_structure(spec).pass);
    spec.diagonal = false;
    EXPECT_TRUE(check_structure(spec).condition_c_prime);
    spec.a0.c2 = 0.1;
    EXPECT_FALSE(check_structure(spec).pass);
}

TEST(Model, SquareRootDiffusion)
{
    const ProblemSpec spec = pinned_unit();
    EXPECT_NEAR(sqrt_diffusion(spec, 0.5), 0.5, 1e-15);
    // int_0^1 |u| du
    EXPECT_NEAR(beta22_increment(spec, 0.0, 1.0), 0.5, 1e-12);
    EXPECT_NEAR(beta22_increment(spec, 1.0, 0.0), -0.5, 1e-12);
}

TEST(ModelProperty, ScalarFnDerivativeMatchesDifferenceQuotient)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pick(0.05, 0.95);
    const ProblemSpec spec = pinned_unit();
    for (int k = 0; k < 200; ++k) {
        const double u = pick(rng);
        const double h = 1e-6;
        for (const ScalarFn* g : {&spec.flux_f1, &spec.diff_b22, &spec.b}) {
            const double fd = ((*g)(u + h) - (*g)(u - h)) / (2.0 * h);
            EXPECT_NEAR(g->d1(u), fd, 1e-7);
        }
    }
}
