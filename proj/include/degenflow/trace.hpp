#pragma once

#include <array>
#include <functional>
#include <vector>

#include "degenflow/entropy.hpp"
#include "degenflow/grid.hpp"
#include "degenflow/solver.hpp"
#include "degenflow/verify.hpp"

namespace degenflow {

/// u restricted to the Gamma' deformation layers, one profile per depth.
struct TraceProfile {
    std::vector<double> s_values;                // strictly decreasing
    std::vector<double> times;
    /// profiles[k][n][m]: depth k, time level n, sample m (left path then right path).
    std::vector<std::vector<std::vector<double>>> profiles;
    std::vector<double> l1_gaps;                 // between consecutive depths, L1 over (t, x'')
    std::vector<std::vector<double>> u_tau;      // innermost profile
};

TraceProfile extract_trace_profile(const RunArtifacts& run, const std::vector<double>& s_values);

/// Gaps non-increasing toward the boundary, each step allowed to grow by
/// `noise` relative to its predecessor.
bool gaps_decreasing(const std::vector<double>& gaps, double noise = 0.1);

struct SmoothFn {
    std::function<double(double, double)> value;
    std::function<std::array<double, 2>(double, double)> grad;
};

using PointField = std::function<std::array<double, 2>(double, double)>;

VectorField sample_vector_field(const PointField& F, const Grid& grid);

struct GaussGreenResult {
    double volume_grad = 0.0;   // int grad g . F
    double volume_div = 0.0;    // int g div F
    double pairing = 0.0;       // sum over boundary faces of g (F.nu) |face|
    double residual = 0.0;      // |volume_grad + volume_div - pairing|
    double field_norm = 0.0;    // max |F| + max |DF| over cells
};

/// div F by centered differences (one-sided at the ends); boundary faces
/// take the normal component of the adjacent cell.
GaussGreenResult gauss_green_check(const VectorField& F, const SmoothFn& g, const Grid& grid);

struct GaussGreenRefinement {
    GaussGreenResult coarse;
    GaussGreenResult fine;
    double ratio = 0.0;         // coarse.residual / fine.residual
};

GaussGreenRefinement gauss_green_refinement(const PointField& F, const SmoothFn& g, const GridSpec& coarse);

struct BoundaryTraceEstimate {
    std::vector<double> eps;
    std::vector<double> values;   // -eps^-1 int_{L_eps} g grad m . F
    double limit = 0.0;           // least-squares line in eps, evaluated at 0
    double pairing = 0.0;         // face pairing from gauss_green_check
    double agreement = 0.0;       // |limit - pairing|
};

/// Boundary-layer representation of the normal trace on the whole of
/// dOmega with m = distance to the boundary. Bands are whole rings of cells;
/// eps must be a multiple of the cell size (the smaller one).
BoundaryTraceEstimate boundary_layer_trace(const VectorField& F, const SmoothFn& g, const Grid& grid,
                                           const std::vector<double>& eps_list);

struct TimeTraceResult {
    double k = 0.0;
    double excess = 0.0;       // int (trace |u - k| - |u0 - k|)_+
    double mismatch = 0.0;     // int |trace u - u0|
    double tolerance = 0.0;
    std::vector<double> band_widths;
};

/// Normal traces at t = 0 of (|u - k|, -K(u, k)) and of (u, f(u) - d B(u))
/// from time bands [0, tau], extrapolated to tau = 0 along dyadic tau.
TimeTraceResult time_zero_trace(const RunArtifacts& run, double k, double tol_scale = 1.0);

/// Report entries for a list of levels.
VerificationReport check_time_zero_trace(const RunArtifacts& run, const std::vector<double>& k_list,
                                         double tol_scale = 1.0);

/// Report entries for the deformation-layer diagnostic.
VerificationReport check_trace_profile(const TraceProfile& profile, double noise = 0.1);

}  // namespace degenflow
