#include <gtest/gtest.h>

#include <algorithm>

#include "degenflow/grid.hpp"

using namespace degenflow;

namespace {

GridSpec unit(int n1, int n2) { return GridSpec{n1, n2, {0.0, 1.0}, {0.0, 1.0}}; }

}  // namespace

TEST(Grid, CellCentersAndSpacing)
{
    const Grid g(GridSpec{4, 5, {-1.0, 1.0}, {0.0, 2.5}});
    EXPECT_DOUBLE_EQ(g.dx1(), 0.5);
    EXPECT_DOUBLE_EQ(g.dx2(), 0.5);
    EXPECT_DOUBLE_EQ(g.x1(0), -0.75);
    EXPECT_DOUBLE_EQ(g.x1(3), 0.75);
    EXPECT_DOUBLE_EQ(g.x2(4), 2.25);
    EXPECT_DOUBLE_EQ(g.cell_volume(), 0.25);
    EXPECT_EQ(g.cell_count(), 20u);
}

TEST(Grid, RejectsDegenerateRequests)
{
    EXPECT_THROW(Grid(unit(1, 4)), Error);
    EXPECT_THROW(Grid(GridSpec{4, 4, {0.0, 0.0}, {0.0, 1.0}}), Error);
}

TEST(Grid, BoundaryFacesSplitByFactor)
{
    const Grid g(unit(3, 5));
    const auto& faces = g.boundary_faces();
    ASSERT_EQ(faces.size(), 2u * (3 + 5));
    const auto prime = std::count_if(faces.begin(), faces.end(),
                                     [](const BoundaryFace& f) { return f.tag == BoundaryTag::GammaPrime; });
    EXPECT_EQ(prime, 2 * 5);
    for (const auto& f : faces) {
        EXPECT_EQ(f.axis == Axis::X1, f.tag == BoundaryTag::GammaPrime);
    }
}

TEST(Grid, NeighborsStopAtTheBoundary)
{
    const Grid g(unit(3, 3));
    EXPECT_EQ(g.neighbor(0, 1, Axis::X1, -1), -1);
    EXPECT_EQ(g.neighbor(0, 1, Axis::X1, +1), static_cast<long>(g.index(1, 1)));
    EXPECT_EQ(g.neighbor(1, 2, Axis::X2, +1), -1);
    EXPECT_EQ(g.neighbor(1, 2, Axis::X2, -1), static_cast<long>(g.index(1, 1)));
}

TEST(Grid, BoundaryLayerCutoff)
{
    const Grid g(unit(10, 10));
    const LayerField layer = boundary_layer(g, 0.2, Factor::DoublePrime);
    // Centers at 0.05, 0.15, 0.25: distance over delta, capped at 1.
    EXPECT_NEAR(layer.values(4, 0), 0.25, 1e-15);
    EXPECT_NEAR(layer.values(4, 1), 0.75, 1e-15);
    EXPECT_DOUBLE_EQ(layer.values(4, 2), 1.0);
    EXPECT_NEAR(layer.values(4, 9), 0.25, 1e-15);
    EXPECT_DOUBLE_EQ(layer.values(0, 5), 1.0);
    EXPECT_THROW(boundary_layer(g, 0.6, Factor::Prime), Error);
}

TEST(Grid, LayerGradientIsInwardSlope)
{
    const Grid g(unit(10, 10));
    const Field grad = layer_gradient(g, boundary_layer(g, 0.3, Factor::Prime));
    // Linear ramp x/0.3 away from the walls.
    EXPECT_NEAR(grad(1, 3), 1.0 / 0.3, 1e-12);
    EXPECT_NEAR(grad(8, 3), -1.0 / 0.3, 1e-12);
    EXPECT_NEAR(grad(5, 3), 0.0, 1e-12);
}

TEST(Grid, DeformationLayersPickMirrorColumns)
{
    const Grid g(unit(16, 4));
    const auto layers = deformation_layers(g, {3.5 / 16, 0.5 / 16});
    ASSERT_EQ(layers.size(), 2u);
    EXPECT_EQ(layers[0].column_left, 3u);
    EXPECT_EQ(layers[0].column_right, 12u);
    EXPECT_EQ(layers[1].column_left, 0u);
    ASSERT_EQ(layers[1].paths.size(), 2u);
    EXPECT_EQ(layers[1].paths[1].front(), g.index(15, 0));
    EXPECT_THROW(deformation_layers(g, {0.75}), Error);
}
