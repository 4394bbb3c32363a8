#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "degenflow/grid.hpp"
#include "degenflow/model.hpp"

namespace degenflow {

/// sgn with sgn(0) = 0.
inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Two-component field (x' and x'' components) on a Grid.
struct VectorField {
    Field c1;
    Field c2;
};

/// Kruzhkov flux sgn(u - v)(f(u) - f(v)), components (x', x'').
std::array<double, 2> kru_flux_F(double u, double v, const ProblemSpec& spec);

/// The b22 entry of the Kruzhkov diffusion matrix: sgn(u - v)(b22(u) - b22(v)).
double kru_diffusion_B(double u, double v, const ProblemSpec& spec);

/// K_{x''}(u, v) = grad_{x''}.B(u, v) - F(u, v) for two cell fields. The
/// x''-derivative is centered inside, second-order one-sided next to Gamma''.
VectorField K_pair(const Field& u, const Field& v, const Grid& grid, const ProblemSpec& spec);

VectorField K_field(const Field& u, double k, const Grid& grid, const ProblemSpec& spec);

/// H_{x''}(u, k, w) = K(u, k) + K(u, w) - K(w, k).
VectorField H_field(const Field& u, double k, const Field& w, const Grid& grid, const ProblemSpec& spec);

/// |u - v| + |u - w| - |w - v| (never negative).
double A_fn(double u, double v, double w);

/// xi^T B*(u, v, w) xi with B* = B(u, v) + B(u, w) - B(w, v).
double Bstar_quadratic(double u, double v, double w, std::array<double, 2> xi, const ProblemSpec& spec);

/// Smooth odd sign: -1 below -delta, sin(pi v / (2 delta)) inside, 1 above.
double sgn_delta(double v, double delta);
double sgn_delta_prime(double v, double delta);
/// Antiderivative of sgn_delta with eta_delta(0) = 0.
double eta_delta(double v, double delta);

/// chi(xi; u): 1 for 0 < xi <= u, -1 for u <= xi < 0, otherwise 0.
int chi(double xi, double u);

/// Kruzhkov entropy eta_xi(u) = (xi - u)_+ - (xi)_+ used for the kinetic defect.
double eta_xi(double u, double xi);

/// chi(xi; u) sampled at the midpoints of a uniform xi-grid over [-L, L].
class KineticSlab {
public:
    KineticSlab(const Field& u, double cutoff, int n_xi);

    [[nodiscard]] double cutoff() const { return cutoff_; }
    [[nodiscard]] double dxi() const { return dxi_; }
    [[nodiscard]] const std::vector<double>& xi_grid() const { return xi_; }
    [[nodiscard]] std::size_t cells() const { return cells_; }
    [[nodiscard]] std::size_t n1() const { return n1_; }
    [[nodiscard]] std::size_t n2() const { return n2_; }
    [[nodiscard]] int value(std::size_t cell, std::size_t k) const { return values_[cell * xi_.size() + k]; }

private:
    double cutoff_;
    double dxi_;
    std::size_t n1_;
    std::size_t n2_;
    std::size_t cells_;
    std::vector<double> xi_;
    std::vector<std::int8_t> values_;
};

/// Midpoint quadrature of eta'(xi) chi(xi; u) d xi per cell; recovers
/// eta(u) - eta(0).
Field moment(const std::function<double(double)>& eta_prime, const KineticSlab& slab);

}  // namespace degenflow
