#pragma once

#include <functional>
#include <vector>

#include "degenflow/grid.hpp"
#include "degenflow/model.hpp"

namespace degenflow {

/// How the Gamma' faces are closed. ZeroFlux realizes the Neumann condition
/// (total normal flux vanishes); Extrapolate copies the boundary cell into
/// the ghost and lets the advective flux leave. The latter is wrong on
/// purpose and exists only as a negative control for the verifier.
enum class NeumannMode { ZeroFlux, Extrapolate };

struct SolverConfig {
    double eps = 0.0;
    double cfl = 0.4;
    double t_end = 0.1;
    std::vector<double> snapshot_times;  // sorted, in (0, t_end]; t_end is always added
    bool keep_trajectory = false;        // store every accepted state
    NeumannMode neumann = NeumannMode::ZeroFlux;
};

struct Snapshot {
    double t = 0.0;
    Field u;
};

struct StepDiagnostics {
    double t = 0.0;
    double dt = 0.0;
    double min = 0.0;
    double max = 0.0;
    double mass = 0.0;
    double gamma1_outflow = 0.0;   // integrated outward flux through Gamma' over the step
    double gamma2_outflow = 0.0;   // same for Gamma''
};

struct RunArtifacts {
    GridSpec grid;
    ProblemSpec spec;
    SolverConfig config;
    std::vector<Snapshot> snapshots;   // t = 0 first, then the requested times
    std::vector<double> dt_history;
    std::vector<StepDiagnostics> diagnostics;
    std::vector<double> trajectory_times;
    std::vector<Field> trajectory;     // only with keep_trajectory; trajectory[0] is u0
    double grad_u_sq = 0.0;            // int_0^T int |grad u|^2
    double grad_b_sq = 0.0;            // int_0^T int |d_{x''} b(u)|^2
    int rejected_steps = 0;

    [[nodiscard]] const Snapshot& final_snapshot() const { return snapshots.back(); }
};

/// Numerical fluxes of the explicit scheme: Lax-Friedrichs/Rusanov
/// advection with the global wave-speed bound on [u_min, u_max], plus
/// centered differences of b22 (x'' only) and eps u (both axes).
class FluxScheme {
public:
    FluxScheme(const ProblemSpec& spec, const Grid& grid, double eps);

    /// Flux through an x'-face from left state a to right state b.
    [[nodiscard]] double x1(double a, double b) const;
    /// Flux through an x''-face from lower state a to upper state b.
    [[nodiscard]] double x2(double a, double b) const;

    [[nodiscard]] double alpha1() const { return alpha1_; }
    [[nodiscard]] double alpha2() const { return alpha2_; }

private:
    const ProblemSpec* spec_;
    double alpha1_;
    double alpha2_;
    double eps_;
    double dx1_;
    double dx2_;
};

struct StepResult {
    Field next;
    double gamma1_outflow = 0.0;
    double gamma2_outflow = 0.0;
};

double stable_dt(const ProblemSpec& spec, const Grid& grid, const SolverConfig& config);

/// Cell field of u0 at cell centers.
Field sample_initial(const ProblemSpec& spec, const Grid& grid);

/// Ghost value on Gamma'' next to column i: lower (side = -1) or upper (+1).
double dirichlet_ghost(const ProblemSpec& spec, const Grid& grid, std::size_t i, int side);

/// One forward-Euler step of size dt.
StepResult step(const Field& state, const ProblemSpec& spec, const Grid& grid, const SolverConfig& config,
                double dt);

using StepObserver = std::function<void(double t, double dt, const Field& before, const Field& after)>;

RunArtifacts run(const ProblemSpec& spec, const Grid& grid, const SolverConfig& config,
                 const StepObserver& observer = {});

/// Same as run but starts from a given field (used by perturbation tests).
RunArtifacts run_from(const Field& initial, const ProblemSpec& spec, const Grid& grid, const SolverConfig& config,
                      const StepObserver& observer = {});

struct ContinuationTable {
    std::vector<double> eps;
    std::vector<double> pairwise_l1;   // ||u^{eps_k} - u^{eps_k+1}||_L1 at t_end
    std::vector<double> eps_grad_sq;   // eps * int int |grad u|^2
    std::vector<double> grad_b_sq;     // int int |d_{x''} b(u)|^2
    std::vector<Field> finals;
};

ContinuationTable viscosity_continuation(const ProblemSpec& spec, const Grid& grid, const SolverConfig& base,
                                         const std::vector<double>& eps_list);

double l1_norm(const Field& a, const Field& b, const Grid& grid);

/// Worker count from DEGENFLOW_THREADS (default: hardware concurrency).
unsigned thread_budget();

}  // namespace degenflow
