#pragma once

#include <string>
#include <vector>

#include "degenflow/grid.hpp"
#include "degenflow/model.hpp"
#include "degenflow/solver.hpp"

namespace degenflow {

enum class Status { Pass, Fail, Info };

const char* to_string(Status s);

struct CheckEntry {
    std::string id;
    Status status = Status::Info;
    double defect = 0.0;     // signed; checks pass when defect >= -tolerance unless noted
    double tolerance = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckEntry> entries;

    void add(CheckEntry e);
    void merge(const VerificationReport& other);
    /// Sort entries by id; ids must be unique.
    void finalize();
    [[nodiscard]] bool all_pass() const;
    [[nodiscard]] std::size_t count(Status s) const;
    [[nodiscard]] const CheckEntry* find(const std::string& id) const;
};

/// One-dimensional factor of a tensor-product test function.
struct Profile {
    enum class Kind { One, Bump, Ramp, Cosine };
    Kind kind = Kind::One;
    double center = 0.0;   // Bump
    double radius = 1.0;   // Bump
    double lo = 0.0;       // Ramp, Cosine
    double hi = 1.0;

    static Profile one() { return {}; }
    static Profile bump(double c, double r) { return {Kind::Bump, c, r, 0.0, 1.0}; }
    static Profile ramp(double lo, double hi) { return {Kind::Ramp, 0.0, 1.0, lo, hi}; }
    static Profile cosine(double lo, double hi) { return {Kind::Cosine, 0.0, 1.0, lo, hi}; }

    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double deriv(double x) const;
    friend bool operator==(const Profile&, const Profile&) = default;
};

/// phi(t, x1, x2) = theta(t) psi1(x1) psi2(x2).
struct TestFunction {
    std::string id;
    Profile t;
    Profile x1;
    Profile x2;

    [[nodiscard]] double value(double tt, double a, double b) const;
    [[nodiscard]] double d_t(double tt, double a, double b) const;
    [[nodiscard]] double d_1(double tt, double a, double b) const;
    [[nodiscard]] double d_2(double tt, double a, double b) const;
    /// Spatial factor psi1 psi2 at cell centers.
    [[nodiscard]] Field spatial(const Grid& grid) const;
};

/// Nine bumps compactly supported in the space-time interior.
std::vector<TestFunction> interior_bumps(const GridSpec& g, double t_end);
/// Nine functions that do not vanish on Gamma' but vanish near Gamma''.
std::vector<TestFunction> gamma1_functions(const GridSpec& g, double t_end);
/// Eighteen functions reaching Gamma'' (both sides), vanishing near Gamma'.
std::vector<TestFunction> gamma2_functions(const GridSpec& g, double t_end);

/// int int (|phi| + |phi_t| + |grad phi|) by midpoint quadrature in space
/// and the run's time steps.
double test_norm(const TestFunction& phi, const Grid& grid, const std::vector<double>& times);

struct EntropyOptions {
    double c_order = 1.0;               // tol = c_order (dx + dt) ||phi||
    double cell_tolerance = 1e-10;      // for the exact cellwise inequality
    std::vector<double> delta_factors{4.0, 2.0, 1.0};
    double tol_scale = 1.0;
};

/// Value quantum used for the sgn_delta widths: (u_max - u_min) / 1024.
double value_quantum(const ProblemSpec& spec);

VerificationReport check_max_principle(const RunArtifacts& run, double tol_scale = 1.0);

/// For every k and phi two entries: "entropy.cell.*" is the discrete
/// Kruzhkov left side of the scheme (>= -cell_tolerance), "entropy.diss.*"
/// subtracts the b-dissipation (>= -c (dx + dt) ||phi||). Needs the trajectory.
VerificationReport check_entropy_inequality(const RunArtifacts& run, const std::vector<double>& k_list,
                                            const std::vector<TestFunction>& phi_set,
                                            const EntropyOptions& opt = {});

struct WeakFormOptions {
    double c_order = 0.1;
    double tol_scale = 1.0;
};

/// Residual of the Neumann weak form with physical face fluxes and zero flux
/// on Gamma'. Needs the trajectory.
VerificationReport check_neumann_weak_form(const RunArtifacts& run, const std::vector<TestFunction>& phi_set,
                                           const WeakFormOptions& opt = {});

/// Largest |residual| / ((dx + dt) ||phi||) over a set; used by the
/// refinement tests and the CLI summary.
double neumann_max_residual(const RunArtifacts& run, const std::vector<TestFunction>& phi_set);

struct DirichletOptions {
    double trace_constant = 10.0;
    double tol_scale = 1.0;
};

/// Left sides of the two Dirichlet inequalities, the fitted constant
/// ("dirichlet.c_star", info) and the H1-in-x'' / trace check.
VerificationReport check_dirichlet_inequalities(const RunArtifacts& run, const std::vector<double>& k_list,
                                                const std::vector<TestFunction>& phi_set,
                                                const DirichletOptions& opt = {});

struct InitialOptions {
    double c_lip = 1.0;
    double tol_scale = 1.0;
};

/// Dyadic early-time sequence of int |u(t) - u0|; u0 is taken from the run's
/// first snapshot (and trajectory[0] when present).
VerificationReport check_initial_condition(const RunArtifacts& run, const InitialOptions& opt = {});

VerificationReport check_contraction(const RunArtifacts& run_u, const RunArtifacts& run_v, double rel_tol = 1e-10);

/// Entropy production of eta_xi paired with the bumps; ">= -tol" per entry.
VerificationReport check_kinetic_defect(const RunArtifacts& run, const std::vector<double>& xi_list,
                                        const std::vector<TestFunction>& phi_set, double tol = 1e-10);

/// Raw numbers behind the entropy check, exposed for tests.
struct EntropyTerms {
    double left = 0.0;          // discrete Kruzhkov left side
    double dissipation = 0.0;   // max over the delta set
    double weak = 0.0;          // conservative weak residual with the scheme fluxes
};
EntropyTerms entropy_terms(const RunArtifacts& run, double k, const TestFunction& phi,
                           const std::vector<double>& deltas);

/// Evenly spread levels strictly inside [u_min, u_max] (count of them).
std::vector<double> spread_levels(const ProblemSpec& spec, int count);

}  // namespace degenflow
