#pragma once

#include <array>
#include <string>
#include <vector>

#include "degenflow/grid.hpp"

namespace degenflow {

/// Closed-form scalar function of u. Kept as a descriptor (not a callable)
/// so problem instances serialize losslessly and derivatives are exact.
class ScalarFn {
public:
    enum class Kind { Polynomial, SignedPower, Pinned };

    /// sum_k coeffs[k] * u^k; an empty list is the zero function.
    static ScalarFn polynomial(std::vector<double> coeffs);
    static ScalarFn zero() { return polynomial({}); }
    static ScalarFn linear(double c) { return polynomial({0.0, c}); }
    /// c * |u|^m * u / (m + 1), derivative c * |u|^m.
    static ScalarFn signed_power(double c, double m);
    /// c * (u - lo)^p * (hi - u)^q, vanishing at both ends of [lo, hi].
    static ScalarFn pinned(double c, int p, int q, double lo, double hi);

    [[nodiscard]] double operator()(double u) const { return value(u); }
    [[nodiscard]] double value(double u) const;
    [[nodiscard]] double d1(double u) const;
    [[nodiscard]] double d2(double u) const;

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }
    [[nodiscard]] double coef() const { return c_; }
    [[nodiscard]] double exponent() const { return m_; }
    [[nodiscard]] int p() const { return p_; }
    [[nodiscard]] int q() const { return q_; }
    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }
    [[nodiscard]] bool is_zero() const;

    friend bool operator==(const ScalarFn&, const ScalarFn&) = default;

private:
    Kind kind_ = Kind::Polynomial;
    std::vector<double> coeffs_;
    double c_ = 0.0;
    double m_ = 0.0;
    int p_ = 0;
    int q_ = 0;
    double lo_ = 0.0;
    double hi_ = 1.0;
};

/// max |g'(u)| over [a, b]: endpoints, every interior root of g'' and a
/// uniform sample of the interval.
double max_abs_derivative(const ScalarFn& g, double a, double b);

/// max g'(u) over [a, b] (same search as max_abs_derivative).
double max_derivative(const ScalarFn& g, double a, double b);

enum class Condition { C, CPrime };

/// Smooth compactly supported profile psi(r) = (1 - r^2)^3 for r < 1.
double bump_profile(double r);

struct InitialData {
    enum class Kind { Constant, Bump, BumpX2, StepX1 };
    Kind kind = Kind::Constant;
    double base = 0.5;    // Constant value / background level
    double amp = 0.0;     // Bump amplitude
    double c1 = 0.5;      // Bump center
    double c2 = 0.5;
    double radius = 0.25; // Bump radius
    double split = 0.5;   // StepX1: jump location in x'
    double left = 0.0;    // StepX1 states
    double right = 0.0;

    [[nodiscard]] double operator()(double x1, double x2) const;
    friend bool operator==(const InitialData&, const InitialData&) = default;
};

/// a0(x', x'') = c0 + c1 x' + c11 x'^2 + c2 x''. Evaluated on Gamma'' and
/// extended into Omega constant along the x''-normal.
struct BoundaryData {
    double c0 = 0.5;
    double c1 = 0.0;
    double c11 = 0.0;
    double c2 = 0.0;

    [[nodiscard]] double raw(double x1, double x2) const { return c0 + c1 * x1 + c11 * x1 * x1 + c2 * x2; }
    [[nodiscard]] double on_boundary(double x1, double x2_boundary) const { return raw(x1, x2_boundary); }
    /// Value at the nearest point of dOmega'' along the x''-normal.
    [[nodiscard]] double extended(double x1, double x2, const Interval& extent2) const;
    /// d/dx' of the extension (exact).
    [[nodiscard]] double d_dx1(double x1) const { return c1 + 2.0 * c11 * x1; }
    [[nodiscard]] bool depends_on_x2() const { return c2 != 0.0; }
    friend bool operator==(const BoundaryData&, const BoundaryData&) = default;
};

struct ProblemSpec {
    ScalarFn flux_f1 = ScalarFn::zero();
    ScalarFn flux_f2 = ScalarFn::zero();
    ScalarFn diff_b22 = ScalarFn::zero();
    ScalarFn b = ScalarFn::zero();
    double lambda_cap = 1.0;
    double u_min = 0.0;
    double u_max = 1.0;
    BoundaryData a0;
    InitialData u0;
    Condition condition_flag = Condition::C;
    // false models a hypothetical off-diagonal B (audited, never solved).
    bool diagonal = true;
};

struct ModelFamily {
    enum class Kind { TadmorTao, Pinned };
    Kind kind = Kind::Pinned;
    int ell = 1;       // TadmorTao: f1 = u^(ell+1)/(ell+1)
    int n = 2;         // b22 = |u|^n u/(n+1) for both families
    int p = 1;         // Pinned: f1 = u^p (1-u)^q on [u_min, u_max]
    int q = 1;
    double f2 = 0.0;   // optional linear x''-flux coefficient
    double f1_scale = 1.0;  // multiplies f1; 0 gives a purely x''-driven problem
    friend bool operator==(const ModelFamily&, const ModelFamily&) = default;
};

/// Builds a ProblemSpec for a family; throws Error("tadmor_tao requires n >= 2*ell") etc.
ProblemSpec make_problem(const ModelFamily& family, double u_min, double u_max, double lambda_cap = 1.0);

struct EllipticityReport {
    bool pass = true;
    double worst_lower_margin = 0.0;  // min of b22' - b'^2
    double worst_upper_margin = 0.0;  // min of lambda b'^2 - b22'
    double u_at_lower = 0.0;
    double u_at_upper = 0.0;
};

struct PinningReport {
    bool pass = true;
    double residual_min = 0.0;
    double residual_max = 0.0;
    double tolerance = 0.0;
};

struct SymbolDirection {
    double tau = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
};

struct NondegeneracyReport {
    double max_fraction = 0.0;
    SymbolDirection worst;
    std::vector<double> fractions;
    std::vector<SymbolDirection> directions;
};

struct StructureReport {
    bool pass = false;
    bool condition_c = false;
    bool condition_c_prime = false;
    bool declared_holds = false;
    bool extension_constant = false;
    std::string message;
};

EllipticityReport validate_ellipticity(const ProblemSpec& spec, int n_samples, double tol = 1e-12);

PinningReport validate_flux_pinning(const ProblemSpec& spec, double tol = 1e-12);

/// Fraction of v in [u_min, u_max] (uniform midpoint sample of n_u points)
/// where (tau + a(v).kappa)^2 + (b22'(v) kappa2^2)^2 < threshold.
double degenerate_fraction(const ProblemSpec& spec, const SymbolDirection& dir, int n_u, double threshold);

/// Scans n_dirs unit directions (tau, kappa) on a Fibonacci sphere.
NondegeneracyReport nondegeneracy_scan(const ProblemSpec& spec, int n_dirs, int n_u, double threshold);

StructureReport check_structure(const ProblemSpec& spec);

/// beta22'(u) = sqrt(b22'(u)); throws Error when b22'(u) < 0.
double sqrt_diffusion(const ProblemSpec& spec, double u);

/// beta22(b) - beta22(a) by Gauss-Legendre quadrature of sqrt(b22').
double beta22_increment(const ProblemSpec& spec, double a, double b);

/// Checks u0 and a0 take values in [u_min, u_max] on a sample lattice.
void validate_data(const ProblemSpec& spec, const GridSpec& grid);

std::string to_string(Condition c);

}  // namespace degenflow
