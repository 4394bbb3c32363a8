#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace degenflow {

/// Raised for invalid inputs to any degenflow routine (bad grid sizes,
/// out-of-range parameters, malformed scenario text).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    [[nodiscard]] double length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Product mesh request for Omega = Omega' x Omega''. Axis 1 is x' (the
/// hyperbolic factor, Neumann boundary), axis 2 is x'' (the parabolic
/// factor, Dirichlet boundary).
struct GridSpec {
    int n1 = 0;
    int n2 = 0;
    Interval extent1;
    Interval extent2;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class Axis { X1, X2 };

/// Gamma' = dOmega' x Omega'' (normals along x'), Gamma'' = Omega' x dOmega''.
enum class BoundaryTag { GammaPrime, GammaDoublePrime };

/// Which factor of the product a boundary layer or deformation hugs.
enum class Factor { Prime, DoublePrime };

struct BoundaryFace {
    std::size_t cell = 0;
    Axis axis = Axis::X1;
    int normal_sign = 1;  // +1 outward along +axis, -1 along -axis
    BoundaryTag tag = BoundaryTag::GammaPrime;
};

/// Cell-centered scalar field on a Grid; row = x' index, column = x'' index.
class Field {
public:
    Field() = default;
    Field(std::size_t n1, std::size_t n2, double fill = 0.0)
        : n1_(n1), n2_(n2), data_(n1 * n2, fill) {}

    [[nodiscard]] std::size_t n1() const { return n1_; }
    [[nodiscard]] std::size_t n2() const { return n2_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * n2_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n2_ + j]; }
    double& operator[](std::size_t k) { return data_[k]; }
    double operator[](std::size_t k) const { return data_[k]; }

    [[nodiscard]] std::vector<double>& values() { return data_; }
    [[nodiscard]] const std::vector<double>& values() const { return data_; }

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::size_t n1_ = 0;
    std::size_t n2_ = 0;
    std::vector<double> data_;
};

class Grid {
public:
    explicit Grid(const GridSpec& spec);

    [[nodiscard]] const GridSpec& spec() const { return spec_; }
    [[nodiscard]] std::size_t n1() const { return static_cast<std::size_t>(spec_.n1); }
    [[nodiscard]] std::size_t n2() const { return static_cast<std::size_t>(spec_.n2); }
    [[nodiscard]] std::size_t cell_count() const { return n1() * n2(); }
    [[nodiscard]] double dx1() const { return dx1_; }
    [[nodiscard]] double dx2() const { return dx2_; }
    [[nodiscard]] double cell_volume() const { return dx1_ * dx2_; }
    [[nodiscard]] double x1(std::size_t i) const;
    [[nodiscard]] double x2(std::size_t j) const;
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const { return i * n2() + j; }

    /// Neighbor across the face in direction (axis, sign), or -1 at the boundary.
    [[nodiscard]] long neighbor(std::size_t i, std::size_t j, Axis axis, int sign) const;

    [[nodiscard]] const std::vector<BoundaryFace>& boundary_faces() const { return faces_; }

    [[nodiscard]] Field make_field(double fill = 0.0) const { return Field(n1(), n2(), fill); }

private:
    GridSpec spec_;
    double dx1_;
    double dx2_;
    std::vector<BoundaryFace> faces_;
};

/// Boundary-layer cutoff zeta_delta = min(delta, h)/delta at cell centers,
/// with h the distance to the boundary of the chosen factor.
struct LayerField {
    Field values;
    double delta = 0.0;
    Factor side = Factor::DoublePrime;
};

/// Cells whose centers lie on the inward offset of dOmega' by depth s.
/// One path per side of Omega' (left then right), each ordered along x''.
struct DeformationLayer {
    double s = 0.0;
    std::size_t column_left = 0;
    std::size_t column_right = 0;
    std::vector<std::vector<std::size_t>> paths;
};

Grid build_grid(const GridSpec& spec);

std::vector<BoundaryFace> classify_faces(const Grid& grid);

LayerField boundary_layer(const Grid& grid, double delta, Factor side);

/// Discrete gradient of a LayerField along the axis normal to its factor
/// (centered differences, one-sided at the ends).
Field layer_gradient(const Grid& grid, const LayerField& layer);

std::vector<DeformationLayer> deformation_layers(const Grid& grid, const std::vector<double>& s_values);

}  // namespace degenflow
