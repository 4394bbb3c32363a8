#include "degenflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace degenflow {

namespace {

// d/dx2 of a cell field: centered inside, second-order one-sided at the ends.
Field d_dx2(const Field& g, const Grid& grid)
{
    Field out = grid.make_field();
    const std::size_t n = grid.n2();
    const double h = grid.dx2();
    for (std::size_t i = 0; i < grid.n1(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double d;
            if (n < 3) {
                d = (g(i, 1) - g(i, 0)) / h;
            } else if (j == 0) {
                d = (-3.0 * g(i, 0) + 4.0 * g(i, 1) - g(i, 2)) / (2.0 * h);
            } else if (j + 1 == n) {
                d = (3.0 * g(i, n - 1) - 4.0 * g(i, n - 2) + g(i, n - 3)) / (2.0 * h);
            } else {
                d = (g(i, j + 1) - g(i, j - 1)) / (2.0 * h);
            }
            out(i, j) = d;
        }
    }
    return out;
}

}  // namespace

std::array<double, 2> kru_flux_F(double u, double v, const ProblemSpec& spec)
{
    const double s = sgn(u - v);
    return {s * (spec.flux_f1(u) - spec.flux_f1(v)), s * (spec.flux_f2(u) - spec.flux_f2(v))};
}

double kru_diffusion_B(double u, double v, const ProblemSpec& spec)
{
    return sgn(u - v) * (spec.diff_b22(u) - spec.diff_b22(v));
}

VectorField K_pair(const Field& u, const Field& v, const Grid& grid, const ProblemSpec& spec)
{
    Field bfield = grid.make_field();
    VectorField out{grid.make_field(), grid.make_field()};
    for (std::size_t c = 0; c < u.size(); ++c) {
        bfield[c] = kru_diffusion_B(u[c], v[c], spec);
    }
    const Field div = d_dx2(bfield, grid);
    for (std::size_t c = 0; c < u.size(); ++c) {
        const auto F = kru_flux_F(u[c], v[c], spec);
        out.c1[c] = -F[0];
        out.c2[c] = div[c] - F[1];
    }
    return out;
}

VectorField K_field(const Field& u, double k, const Grid& grid, const ProblemSpec& spec)
{
    return K_pair(u, grid.make_field(k), grid, spec);
}

VectorField H_field(const Field& u, double k, const Field& w, const Grid& grid, const ProblemSpec& spec)
{
    const Field kk = grid.make_field(k);
    VectorField a = K_pair(u, kk, grid, spec);
    const VectorField b = K_pair(u, w, grid, spec);
    const VectorField c = K_pair(w, kk, grid, spec);
    for (std::size_t n = 0; n < u.size(); ++n) {
        a.c1[n] += b.c1[n] - c.c1[n];
        a.c2[n] += b.c2[n] - c.c2[n];
    }
    return a;
}

double A_fn(double u, double v, double w)
{
    // Equals |u - v| + |u - w| - |w - v|, written as twice the distance from u
    // to [min(v, w), max(v, w)] so roundoff cannot make it negative.
    return 2.0 * std::max({0.0, std::min(v, w) - u, u - std::max(v, w)});
}

double Bstar_quadratic(double u, double v, double w, std::array<double, 2> xi, const ProblemSpec& spec)
{
    // Only the (2,2) entry of B is nonzero.
    const double bstar = kru_diffusion_B(u, v, spec) + kru_diffusion_B(u, w, spec) - kru_diffusion_B(w, v, spec);
    return xi[1] * xi[1] * bstar;
}

double sgn_delta(double v, double delta)
{
    if (v > delta) {
        return 1.0;
    }
    if (v < -delta) {
        return -1.0;
    }
    return std::sin(std::numbers::pi * v / (2.0 * delta));
}

double sgn_delta_prime(double v, double delta)
{
    if (std::abs(v) > delta) {
        return 0.0;
    }
    const double w = std::numbers::pi / (2.0 * delta);
    return w * std::cos(w * v);
}

double eta_delta(double v, double delta)
{
    const double w = std::numbers::pi / (2.0 * delta);
    const double a = std::abs(v);
    if (a <= delta) {
        return (1.0 - std::cos(w * a)) / w;
    }
    return a - delta + 1.0 / w;
}

int chi(double xi, double u)
{
    if (xi > 0.0 && xi <= u) {
        return 1;
    }
    if (xi < 0.0 && u <= xi) {
        return -1;
    }
    return 0;
}

double eta_xi(double u, double xi) { return std::max(xi - u, 0.0) - std::max(xi, 0.0); }

KineticSlab::KineticSlab(const Field& u, double cutoff, int n_xi)
    : cutoff_(cutoff), dxi_(2.0 * cutoff / n_xi), n1_(u.n1()), n2_(u.n2()), cells_(u.size())
{
    if (n_xi < 1 || !(cutoff > 0.0)) {
        throw Error("kinetic slab: need n_xi >= 1 and L > 0");
    }
    xi_.resize(static_cast<std::size_t>(n_xi));
    for (int k = 0; k < n_xi; ++k) {
        xi_[static_cast<std::size_t>(k)] = -cutoff + (k + 0.5) * dxi_;
    }
    values_.resize(cells_ * xi_.size());
    for (std::size_t c = 0; c < cells_; ++c) {
        if (std::abs(u[c]) > cutoff) {
            throw Error("kinetic slab: |u| exceeds the cutoff L");
        }
        for (std::size_t k = 0; k < xi_.size(); ++k) {
            values_[c * xi_.size() + k] = static_cast<std::int8_t>(chi(xi_[k], u[c]));
        }
    }
}

Field moment(const std::function<double(double)>& eta_prime, const KineticSlab& slab)
{
    std::vector<double> weights(slab.xi_grid().size());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        weights[k] = eta_prime(slab.xi_grid()[k]) * slab.dxi();
    }
    Field out(slab.n1(), slab.n2());
    for (std::size_t c = 0; c < slab.cells(); ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            s += weights[k] * slab.value(c, k);
        }
        out[c] = s;
    }
    return out;
}

}  // namespace degenflow
