#include "degenflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace degenflow {

namespace {

double ipow(double x, int k)
{
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
        r *= x;
    }
    return r;
}

// c * x^k, where a zero coefficient wins over a negative power.
double term(double c, double x, int k)
{
    if (c == 0.0 || k < 0) {
        return 0.0;
    }
    return c * ipow(x, k);
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

template <class Eval>
double search_max(const ScalarFn& g, double a, double b, Eval eval)
{
    if (a > b) {
        std::swap(a, b);
    }
    double best = std::max(eval(a), eval(b));
    if (b == a) {
        return best;
    }
    constexpr int kSamples = 2048;
    const double h = (b - a) / kSamples;
    double prev_u = a;
    double prev_g2 = g.d2(a);
    for (int s = 1; s <= kSamples; ++s) {
        const double u = (s == kSamples) ? b : a + s * h;
        const double g2 = g.d2(u);
        best = std::max(best, eval(u));
        if ((prev_g2 < 0.0 && g2 > 0.0) || (prev_g2 > 0.0 && g2 < 0.0)) {
            double lo = prev_u;
            double hi = u;
            double glo = prev_g2;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g.d2(mid);
                if ((gm < 0.0) == (glo < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            best = std::max({best, eval(lo), eval(hi)});
        } else if (g2 == 0.0) {
            best = std::max(best, eval(u));
        }
        prev_u = u;
        prev_g2 = g2;
    }
    return best;
}

}  // namespace

ScalarFn ScalarFn::polynomial(std::vector<double> coeffs)
{
    ScalarFn f;
    f.kind_ = Kind::Polynomial;
    while (!coeffs.empty() && coeffs.back() == 0.0) {
        coeffs.pop_back();
    }
    f.coeffs_ = std::move(coeffs);
    return f;
}

ScalarFn ScalarFn::signed_power(double c, double m)
{
    if (!(m >= 0.0)) {
        throw Error("signed_power: exponent must be >= 0");
    }
    ScalarFn f;
    f.kind_ = Kind::SignedPower;
    f.c_ = c;
    f.m_ = m;
    return f;
}

ScalarFn ScalarFn::pinned(double c, int p, int q, double lo, double hi)
{
    if (p < 1 || q < 1) {
        throw Error("pinned flux: exponents p, q must be >= 1");
    }
    if (!(hi > lo)) {
        throw Error("pinned flux: requires lo < hi");
    }
    ScalarFn f;
    f.kind_ = Kind::Pinned;
    f.c_ = c;
    f.p_ = p;
    f.q_ = q;
    f.lo_ = lo;
    f.hi_ = hi;
    return f;
}

bool ScalarFn::is_zero() const
{
    switch (kind_) {
    case Kind::Polynomial:
        return coeffs_.empty();
    case Kind::SignedPower:
    case Kind::Pinned:
        return c_ == 0.0;
    }
    return false;
}

double ScalarFn::value(double u) const
{
    switch (kind_) {
    case Kind::Polynomial: {
        double r = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            r = r * u + *it;
        }
        return r;
    }
    case Kind::SignedPower:
        return c_ * std::pow(std::abs(u), m_) * u / (m_ + 1.0);
    case Kind::Pinned:
        return c_ * ipow(u - lo_, p_) * ipow(hi_ - u, q_);
    }
    return 0.0;
}

double ScalarFn::d1(double u) const
{
    switch (kind_) {
    case Kind::Polynomial: {
        double r = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 1;) {
            r = r * u + static_cast<double>(k) * coeffs_[k];
        }
        return r;
    }
    case Kind::SignedPower:
        return m_ == 0.0 ? c_ : c_ * std::pow(std::abs(u), m_);
    case Kind::Pinned: {
        const double a = u - lo_;
        const double b = hi_ - u;
        return c_ * (term(p_, a, p_ - 1) * ipow(b, q_) - ipow(a, p_) * term(q_, b, q_ - 1));
    }
    }
    return 0.0;
}

double ScalarFn::d2(double u) const
{
    switch (kind_) {
    case Kind::Polynomial: {
        double r = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 2;) {
            r = r * u + static_cast<double>(k * (k - 1)) * coeffs_[k];
        }
        return r;
    }
    case Kind::SignedPower:
        if (m_ == 0.0 || u == 0.0) {
            return 0.0;
        }
        return c_ * m_ * std::pow(std::abs(u), m_ - 1.0) * sgn(u);
    case Kind::Pinned: {
        const double a = u - lo_;
        const double b = hi_ - u;
        const double t1 = term(p_ * (p_ - 1), a, p_ - 2) * ipow(b, q_);
        const double t2 = term(2.0 * p_ * q_, a, p_ - 1) * term(1.0, b, q_ - 1);
        const double t3 = ipow(a, p_) * term(q_ * (q_ - 1), b, q_ - 2);
        return c_ * (t1 - t2 + t3);
    }
    }
    return 0.0;
}

double max_abs_derivative(const ScalarFn& g, double a, double b)
{
    return search_max(g, a, b, [&](double u) { return std::abs(g.d1(u)); });
}

double max_derivative(const ScalarFn& g, double a, double b)
{
    return search_max(g, a, b, [&](double u) { return g.d1(u); });
}

double bump_profile(double r)
{
    if (std::abs(r) >= 1.0) {
        return 0.0;
    }
    const double s = 1.0 - r * r;
    return s * s * s;
}

double InitialData::operator()(double x1, double x2) const
{
    switch (kind) {
    case Kind::Constant:
        return base;
    case Kind::Bump: {
        const double r = std::hypot(x1 - c1, x2 - c2) / radius;
        return base + amp * bump_profile(r);
    }
    case Kind::BumpX2:
        return base + amp * bump_profile(std::abs(x2 - c2) / radius);
    case Kind::StepX1:
        return x1 < split ? left : right;
    }
    return base;
}

double BoundaryData::extended(double x1, double x2, const Interval& extent2) const
{
    const double side = (x2 - extent2.lo) <= (extent2.hi - x2) ? extent2.lo : extent2.hi;
    return on_boundary(x1, side);
}

ProblemSpec make_problem(const ModelFamily& family, double u_min, double u_max, double lambda_cap)
{
    if (!(u_max > u_min)) {
        throw Error("model: u_min must be < u_max");
    }
    if (!(lambda_cap >= 1.0)) {
        throw Error("model: lambda must be >= 1");
    }
    if (family.n < 0) {
        throw Error("model: diffusion exponent n must be a natural number");
    }
    ProblemSpec spec;
    spec.u_min = u_min;
    spec.u_max = u_max;
    spec.lambda_cap = lambda_cap;
    switch (family.kind) {
    case ModelFamily::Kind::TadmorTao: {
        if (family.ell < 0) {
            throw Error("tadmor_tao: ell must be a natural number");
        }
        if (family.n < 2 * family.ell) {
            std::ostringstream msg;
            msg << "tadmor_tao requires n >= 2*ell (ell=" << family.ell << ", n=" << family.n << ")";
            throw Error(msg.str());
        }
        std::vector<double> coeffs(static_cast<std::size_t>(family.ell + 2), 0.0);
        coeffs.back() = family.f1_scale / (family.ell + 1);
        spec.flux_f1 = ScalarFn::polynomial(std::move(coeffs));
        break;
    }
    case ModelFamily::Kind::Pinned:
        spec.flux_f1 = ScalarFn::pinned(family.f1_scale, family.p, family.q, u_min, u_max);
        break;
    }
    if (family.f1_scale == 0.0) {
        spec.flux_f1 = ScalarFn::zero();
    }
    spec.diff_b22 = ScalarFn::signed_power(1.0, family.n);
    spec.b = ScalarFn::signed_power(1.0, 0.5 * family.n);
    spec.flux_f2 = family.f2 == 0.0 ? ScalarFn::zero() : ScalarFn::linear(family.f2);
    return spec;
}

EllipticityReport validate_ellipticity(const ProblemSpec& spec, int n_samples, double tol)
{
    EllipticityReport rep;
    rep.worst_lower_margin = std::numeric_limits<double>::infinity();
    rep.worst_upper_margin = std::numeric_limits<double>::infinity();
    const int n = std::max(n_samples, 2);
    for (int s = 0; s < n; ++s) {
        const double u = spec.u_min + (spec.u_max - spec.u_min) * s / (n - 1);
        const double bp = spec.b.d1(u);
        const double b22p = spec.diff_b22.d1(u);
        // d'' = 1: the only unit directions are +-1, both giving |xi|^2 = 1.
        const double lower = b22p - bp * bp;
        const double upper = spec.lambda_cap * bp * bp - b22p;
        const double scale = std::max(1.0, std::abs(b22p));
        if (lower < rep.worst_lower_margin) {
            rep.worst_lower_margin = lower;
            rep.u_at_lower = u;
        }
        if (upper < rep.worst_upper_margin) {
            rep.worst_upper_margin = upper;
            rep.u_at_upper = u;
        }
        if (bp < -tol || lower < -tol * scale || upper < -tol * scale) {
            rep.pass = false;
        }
    }
    return rep;
}

PinningReport validate_flux_pinning(const ProblemSpec& spec, double tol)
{
    PinningReport rep;
    rep.tolerance = tol;
    rep.residual_min = std::abs(spec.flux_f1(spec.u_min));
    rep.residual_max = std::abs(spec.flux_f1(spec.u_max));
    rep.pass = rep.residual_min <= tol && rep.residual_max <= tol;
    return rep;
}

double degenerate_fraction(const ProblemSpec& spec, const SymbolDirection& dir, int n_u, double threshold)
{
    const int n = std::max(n_u, 1);
    const double h = (spec.u_max - spec.u_min) / n;
    long hits = 0;
    for (int k = 0; k < n; ++k) {
        const double v = spec.u_min + (k + 0.5) * h;
        const double transport = dir.tau + spec.flux_f1.d1(v) * dir.kappa1 + spec.flux_f2.d1(v) * dir.kappa2;
        const double diffusion = spec.diff_b22.d1(v) * dir.kappa2 * dir.kappa2;
        if (transport * transport + diffusion * diffusion < threshold) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / n;
}

NondegeneracyReport nondegeneracy_scan(const ProblemSpec& spec, int n_dirs, int n_u, double threshold)
{
    NondegeneracyReport rep;
    // Coordinate axes first, then a Fibonacci lattice on the unit sphere.
    for (int a = 0; a < 3; ++a) {
        for (double sign : {1.0, -1.0}) {
            SymbolDirection d;
            (a == 0 ? d.tau : a == 1 ? d.kappa1 : d.kappa2) = sign;
            rep.directions.push_back(d);
        }
    }
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n_dirs; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n_dirs;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        rep.directions.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    for (const auto& d : rep.directions) {
        const double frac = degenerate_fraction(spec, d, n_u, threshold);
        rep.fractions.push_back(frac);
        if (frac > rep.max_fraction || rep.fractions.size() == 1) {
            rep.max_fraction = frac;
            rep.worst = d;
        }
    }
    return rep;
}

StructureReport check_structure(const ProblemSpec& spec)
{
    StructureReport rep;
    rep.condition_c = spec.diagonal;
    rep.condition_c_prime = !spec.a0.depends_on_x2();
    rep.declared_holds = spec.condition_flag == Condition::C ? rep.condition_c : rep.condition_c_prime;

    // The extension must be constant along x''-normals near each side of
    // the unit reference interval.
    const Interval ref{0.0, 1.0};
    rep.extension_constant = true;
    for (double x1 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (double side : {ref.lo, ref.hi}) {
            const double target = spec.a0.on_boundary(x1, side);
            for (double depth : {0.0, 0.1, 0.25, 0.45}) {
                const double x2 = side == ref.lo ? ref.lo + depth : ref.hi - depth;
                if (spec.a0.extended(x1, x2, ref) != target) {
                    rep.extension_constant = false;
                }
            }
        }
    }

    rep.pass = (rep.condition_c || rep.condition_c_prime) && rep.extension_constant;
    std::ostringstream msg;
    if (rep.condition_c) {
        msg << "condition (C) holds: B is diagonal";
    } else if (rep.condition_c_prime) {
        msg << "condition (C') holds: a0 is independent of x''";
    } else {
        msg << "neither (C) nor (C') holds: off-diagonal B with x''-dependent a0";
    }
    if (!rep.declared_holds) {
        msg << "; declared flag " << to_string(spec.condition_flag) << " does not hold";
    }
    rep.message = msg.str();
    return rep;
}

double sqrt_diffusion(const ProblemSpec& spec, double u)
{
    const double d = spec.diff_b22.d1(u);
    if (d < 0.0) {
        std::ostringstream msg;
        msg << "ellipticity violation: b22'(" << u << ") = " << d << " < 0";
        throw Error(msg.str());
    }
    return std::sqrt(d);
}

double beta22_increment(const ProblemSpec& spec, double a, double b)
{
    static constexpr std::array<double, 4> kNodes = {0.1834346424956498, 0.5255324099163290,
                                                     0.7966664774136267, 0.9602898564975363};
    static constexpr std::array<double, 4> kWeights = {0.3626837833783620, 0.3137066458778873,
                                                       0.2223810344533745, 0.1012285362903763};
    auto integrate = [&](double lo, double hi) {
        double sum = 0.0;
        constexpr int kPanels = 2;
        const double w = (hi - lo) / kPanels;
        for (int p = 0; p < kPanels; ++p) {
            const double mid = lo + (p + 0.5) * w;
            for (std::size_t k = 0; k < kNodes.size(); ++k) {
                const double off = 0.5 * w * kNodes[k];
                sum += kWeights[k] * (std::sqrt(std::max(0.0, spec.diff_b22.d1(mid - off))) +
                                      std::sqrt(std::max(0.0, spec.diff_b22.d1(mid + off))));
            }
        }
        return 0.5 * w * sum;
    };
    if (a == b) {
        return 0.0;
    }
    // sqrt(b22') may have a kink at 0 for the power families.
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
        return integrate(a, 0.0) + integrate(0.0, b);
    }
    return integrate(a, b);
}

void validate_data(const ProblemSpec& spec, const GridSpec& grid)
{
    constexpr int kLattice = 129;
    const double tol = 1e-14 * std::max(1.0, spec.u_max - spec.u_min);
    auto in_range = [&](double v) { return v >= spec.u_min - tol && v <= spec.u_max + tol; };
    for (int a = 0; a < kLattice; ++a) {
        const double x1 = grid.extent1.lo + grid.extent1.length() * a / (kLattice - 1);
        for (double side : {grid.extent2.lo, grid.extent2.hi}) {
            if (!in_range(spec.a0.on_boundary(x1, side))) {
                throw Error("a0 leaves [u_min, u_max] on Gamma''");
            }
        }
        for (int c = 0; c < kLattice; ++c) {
            const double x2 = grid.extent2.lo + grid.extent2.length() * c / (kLattice - 1);
            if (!in_range(spec.u0(x1, x2))) {
                throw Error("u0 leaves [u_min, u_max]");
            }
        }
    }
}

std::string to_string(Condition c) { return c == Condition::C ? "C" : "C'"; }

}  // namespace degenflow
