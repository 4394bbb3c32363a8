#pragma once

#include <optional>
#include <string>
#include <vector>

#include "degenflow/grid.hpp"
#include "degenflow/model.hpp"
#include "degenflow/solver.hpp"

namespace degenflow {

struct VerifySettings {
    // trace_profile is opt-in; the trace subcommand always runs it.
    std::vector<std::string> checks{"max_principle", "entropy", "neumann", "dirichlet", "initial", "kinetic",
                                    "time_trace"};
    int k_levels = 9;                     // evenly spread inside [u_min, u_max]
    std::vector<double> k_list;           // overrides k_levels when non-empty
    std::vector<double> xi_list;          // empty: same as the k levels
    std::vector<double> trace_depths{6.0, 4.5, 3.0, 1.5};  // multiples of dx1
    double nondeg_threshold = 1e-4;
    double nondeg_max_fraction = 0.05;
    int nondeg_directions = 200;
    int nondeg_samples = 20000;
    double energy_bound = 4.0;            // sweep: max/min of eps |grad u|^2 across the list

    friend bool operator==(const VerifySettings&, const VerifySettings&) = default;
};

/// Everything one scenario file describes.
struct Scenario {
    GridSpec grid{32, 32, {0.0, 1.0}, {0.0, 1.0}};
    ModelFamily family;
    double lambda_cap = 1.0;
    double u_min = 0.0;
    double u_max = 1.0;
    InitialData u0;
    std::optional<InitialData> u0_alt;    // [data2], used by contract
    BoundaryData a0;
    double eps = 1e-3;
    std::vector<double> eps_list;
    double cfl = 0.4;
    double t_end = 0.1;
    std::vector<double> snapshots;
    int early_levels = 0;                 // extra snapshots at 2^m * stable dt, m < early_levels
    bool keep_trajectory = false;
    NeumannMode neumann = NeumannMode::ZeroFlux;
    VerifySettings verify;
    std::vector<std::string> defaulted;   // "section.key" not given in the text

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses the sectioned key = value text. Syntax errors carry "line N";
/// semantic errors name the validator that rejected the scenario.
Scenario parse_scenario(const std::string& text);

/// Canonical text; defaulted keys are written as comments so a re-parse
/// records them as defaulted again.
std::string serialize_scenario(const Scenario& s);

ProblemSpec build_problem(const Scenario& s);
/// Problem with u0 replaced by the [data2] block.
ProblemSpec build_alt_problem(const Scenario& s);
SolverConfig build_config(const Scenario& s, const ProblemSpec& spec);

/// The level list used by entropy/dirichlet checks.
std::vector<double> scenario_levels(const Scenario& s);

const std::vector<std::string>& known_checks();

}  // namespace degenflow
