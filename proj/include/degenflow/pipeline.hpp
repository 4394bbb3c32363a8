#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "degenflow/scenario.hpp"
#include "degenflow/solver.hpp"
#include "degenflow/trace.hpp"
#include "degenflow/verify.hpp"

namespace degenflow {

RunArtifacts run_scenario(const Scenario& s, bool keep_trajectory);
/// Same with u0 taken from the [data2] block.
RunArtifacts run_alt_scenario(const Scenario& s, bool keep_trajectory);

/// The checks listed in s.verify.checks, applied to a run that kept its
/// trajectory.
VerificationReport verify_run(const Scenario& s, const RunArtifacts& run, double tol_scale = 1.0);

struct SweepResult {
    ContinuationTable table;
    VerificationReport report;   // "sweep.cauchy", "sweep.energy"
};

/// Viscosity continuation over s.eps_list: pairwise L1 gaps strictly
/// decreasing and max/min of eps |grad u|^2 within s.verify.energy_bound.
SweepResult sweep_eps(const Scenario& s);

/// True when nothing in the scenario depends on x': no x'-flux, a0 and u0
/// constant in x'. Then every deformation layer carries the same profile.
bool x1_invariant(const Scenario& s);

struct TraceResult {
    TraceProfile profile;
    VerificationReport report;   // "trace.gamma1" and, for x'-invariant scenarios, "trace.symmetric"
};

TraceResult trace_scenario(const Scenario& s, const RunArtifacts& run);

/// Polynomial vector fields on a coarse grid and its 2x refinement:
/// "gauss_green.<name>.order" (residual ratio in [1.5, 3]) and
/// "gauss_green.<name>.trace" (layer limit vs face pairing within 2 dx |F|).
VerificationReport gauss_green_battery(const GridSpec& coarse, double tol_scale = 1.0);

/// L1 contraction between the [data] and [data2] runs.
VerificationReport contract_scenario(const Scenario& s);

/// Model validators only: ellipticity, pinning (info when it fails),
/// structure and the non-degeneracy scan. A seed adds random directions.
VerificationReport audit_scenario(const Scenario& s, std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace degenflow
