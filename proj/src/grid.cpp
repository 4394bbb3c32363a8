#include "degenflow/grid.hpp"

#include <algorithm>
#include <cmath>

namespace degenflow {

Grid::Grid(const GridSpec& spec) : spec_(spec)
{
    if (spec.n1 < 2 || spec.n2 < 2) {
        throw Error("grid: n1 and n2 must both be >= 2 (got " + std::to_string(spec.n1) + ", " +
                    std::to_string(spec.n2) + ")");
    }
    if (!(spec.extent1.length() > 0.0) || !(spec.extent2.length() > 0.0)) {
        throw Error("grid: extents must have positive length");
    }
    dx1_ = spec.extent1.length() / spec.n1;
    dx2_ = spec.extent2.length() / spec.n2;

    // x' ends first, then x'' ends; each cell-adjacent face appears once.
    for (std::size_t j = 0; j < n2(); ++j) {
        faces_.push_back({index(0, j), Axis::X1, -1, BoundaryTag::GammaPrime});
        faces_.push_back({index(n1() - 1, j), Axis::X1, +1, BoundaryTag::GammaPrime});
    }
    for (std::size_t i = 0; i < n1(); ++i) {
        faces_.push_back({index(i, 0), Axis::X2, -1, BoundaryTag::GammaDoublePrime});
        faces_.push_back({index(i, n2() - 1), Axis::X2, +1, BoundaryTag::GammaDoublePrime});
    }
}

double Grid::x1(std::size_t i) const { return spec_.extent1.lo + (static_cast<double>(i) + 0.5) * dx1_; }

double Grid::x2(std::size_t j) const { return spec_.extent2.lo + (static_cast<double>(j) + 0.5) * dx2_; }

long Grid::neighbor(std::size_t i, std::size_t j, Axis axis, int sign) const
{
    const long ii = static_cast<long>(i) + (axis == Axis::X1 ? sign : 0);
    const long jj = static_cast<long>(j) + (axis == Axis::X2 ? sign : 0);
    if (ii < 0 || jj < 0 || ii >= static_cast<long>(n1()) || jj >= static_cast<long>(n2())) {
        return -1;
    }
    return static_cast<long>(index(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj)));
}

Grid build_grid(const GridSpec& spec) { return Grid(spec); }

std::vector<BoundaryFace> classify_faces(const Grid& grid) { return grid.boundary_faces(); }

LayerField boundary_layer(const Grid& grid, double delta, Factor side)
{
    const Interval& ext = side == Factor::Prime ? grid.spec().extent1 : grid.spec().extent2;
    if (!(delta > 0.0) || !(delta < 0.5 * ext.length())) {
        throw Error("boundary_layer: delta must lie in (0, half the factor extent)");
    }
    LayerField layer{grid.make_field(), delta, side};
    for (std::size_t i = 0; i < grid.n1(); ++i) {
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            const double x = side == Factor::Prime ? grid.x1(i) : grid.x2(j);
            const double h = std::max(0.0, std::min(x - ext.lo, ext.hi - x));
            layer.values(i, j) = std::min(delta, h) / delta;
        }
    }
    return layer;
}

Field layer_gradient(const Grid& grid, const LayerField& layer)
{
    Field grad = grid.make_field();
    const bool along1 = layer.side == Factor::Prime;
    const std::size_t n = along1 ? grid.n1() : grid.n2();
    const double h = along1 ? grid.dx1() : grid.dx2();
    for (std::size_t i = 0; i < grid.n1(); ++i) {
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            const std::size_t k = along1 ? i : j;
            auto at = [&](std::size_t m) { return along1 ? layer.values(m, j) : layer.values(i, m); };
            double g;
            if (k == 0) {
                g = (at(1) - at(0)) / h;
            } else if (k + 1 == n) {
                g = (at(k) - at(k - 1)) / h;
            } else {
                g = (at(k + 1) - at(k - 1)) / (2.0 * h);
            }
            grad(i, j) = g;
        }
    }
    return grad;
}

std::vector<DeformationLayer> deformation_layers(const Grid& grid, const std::vector<double>& s_values)
{
    const double half = 0.5 * grid.spec().extent1.length();
    std::vector<DeformationLayer> out;
    out.reserve(s_values.size());
    for (double s : s_values) {
        if (!(s > 0.0) || s > half) {
            throw Error("deformation_layers: depth " + std::to_string(s) + " outside (0, " +
                        std::to_string(half) + "]");
        }
        const long col = std::lround(s / grid.dx1() - 0.5);
        const auto c = static_cast<std::size_t>(std::clamp(col, 0L, static_cast<long>(grid.n1() / 2) - 1));
        DeformationLayer layer;
        layer.s = s;
        layer.column_left = c;
        layer.column_right = grid.n1() - 1 - c;
        for (std::size_t column : {layer.column_left, layer.column_right}) {
            std::vector<std::size_t> path(grid.n2());
            for (std::size_t j = 0; j < grid.n2(); ++j) {
                path[j] = grid.index(column, j);
            }
            layer.paths.push_back(std::move(path));
        }
        out.push_back(std::move(layer));
    }
    return out;
}

}  // namespace degenflow
