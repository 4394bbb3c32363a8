#include "degenflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

namespace degenflow {

FluxScheme::FluxScheme(const ProblemSpec& spec, const Grid& grid, double eps)
    : spec_(&spec),
      alpha1_(max_abs_derivative(spec.flux_f1, spec.u_min, spec.u_max)),
      alpha2_(max_abs_derivative(spec.flux_f2, spec.u_min, spec.u_max)),
      eps_(eps),
      dx1_(grid.dx1()),
      dx2_(grid.dx2())
{
}

double FluxScheme::x1(double a, double b) const
{
    const auto& f = spec_->flux_f1;
    return 0.5 * (f(a) + f(b)) - 0.5 * alpha1_ * (b - a) - eps_ * (b - a) / dx1_;
}

double FluxScheme::x2(double a, double b) const
{
    const auto& f = spec_->flux_f2;
    const auto& d = spec_->diff_b22;
    return 0.5 * (f(a) + f(b)) - 0.5 * alpha2_ * (b - a) - (d(b) - d(a)) / dx2_ - eps_ * (b - a) / dx2_;
}

double stable_dt(const ProblemSpec& spec, const Grid& grid, const SolverConfig& config)
{
    if (!(config.eps >= 0.0)) {
        throw Error("solver: eps must be >= 0");
    }
    if (!(config.cfl > 0.0 && config.cfl < 1.0)) {
        throw Error("solver: cfl must lie in (0, 1)");
    }
    const double speed = max_abs_derivative(spec.flux_f1, spec.u_min, spec.u_max) +
                         max_abs_derivative(spec.flux_f2, spec.u_min, spec.u_max);
    const double diff = std::max(0.0, max_derivative(spec.diff_b22, spec.u_min, spec.u_max)) + 2.0 * config.eps;
    const double h = std::min(grid.dx1(), grid.dx2());
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double dt_adv = speed > 0.0 ? h / speed : inf;
    const double dt_diff = diff > 0.0 ? h * h / (2.0 * diff) : inf;
    if (dt_adv == inf && dt_diff == inf) {
        throw Error("static problem: zero wave speed and zero diffusivity");
    }
    return config.cfl * std::min(dt_adv, dt_diff);
}

Field sample_initial(const ProblemSpec& spec, const Grid& grid)
{
    Field u = grid.make_field();
    for (std::size_t i = 0; i < grid.n1(); ++i) {
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            u(i, j) = spec.u0(grid.x1(i), grid.x2(j));
        }
    }
    return u;
}

double dirichlet_ghost(const ProblemSpec& spec, const Grid& grid, std::size_t i, int side)
{
    const auto& e2 = grid.spec().extent2;
    return spec.a0.on_boundary(grid.x1(i), side < 0 ? e2.lo : e2.hi);
}

StepResult step(const Field& state, const ProblemSpec& spec, const Grid& grid, const SolverConfig& config,
                double dt)
{
    const FluxScheme flux(spec, grid, config.eps);
    const std::size_t n1 = grid.n1();
    const std::size_t n2 = grid.n2();
    const double l1 = dt / grid.dx1();
    const double l2 = dt / grid.dx2();

    StepResult res{state, 0.0, 0.0};
    Field& next = res.next;

    // x'-faces, including the Gamma' ends.
    for (std::size_t j = 0; j < n2; ++j) {
        for (std::size_t f = 0; f <= n1; ++f) {
            double F;
            if (f == 0 || f == n1) {
                const std::size_t cell = f == 0 ? 0 : n1 - 1;
                if (config.neumann == NeumannMode::ZeroFlux) {
                    F = 0.0;
                } else {
                    const double u = state(cell, j);
                    F = flux.x1(u, u);
                }
                res.gamma1_outflow += (f == 0 ? -F : F) * grid.dx2() * dt;
            } else {
                F = flux.x1(state(f - 1, j), state(f, j));
            }
            if (f > 0) {
                next(f - 1, j) -= l1 * F;
            }
            if (f < n1) {
                next(f, j) += l1 * F;
            }
        }
    }
    // x''-faces; the Gamma'' ends see the Dirichlet ghost.
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t f = 0; f <= n2; ++f) {
            double F;
            if (f == 0) {
                F = flux.x2(dirichlet_ghost(spec, grid, i, -1), state(i, 0));
                res.gamma2_outflow -= F * grid.dx1() * dt;
            } else if (f == n2) {
                F = flux.x2(state(i, n2 - 1), dirichlet_ghost(spec, grid, i, +1));
                res.gamma2_outflow += F * grid.dx1() * dt;
            } else {
                F = flux.x2(state(i, f - 1), state(i, f));
            }
            if (f > 0) {
                next(i, f - 1) -= l2 * F;
            }
            if (f < n2) {
                next(i, f) += l2 * F;
            }
        }
    }
    for (std::size_t c = 0; c < next.size(); ++c) {
        if (!std::isfinite(next[c])) {
            std::ostringstream msg;
            msg << "solver: non-finite value in cell " << c << " (dt=" << dt << ")";
            throw Error(msg.str());
        }
    }
    return res;
}

double l1_norm(const Field& a, const Field& b, const Grid& grid)
{
    if (a.size() != b.size()) {
        throw Error("l1_norm: field size mismatch");
    }
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        s += std::abs(a[c] - b[c]);
    }
    return s * grid.cell_volume();
}

namespace {

void accumulate_energy(const Field& u, const ProblemSpec& spec, const Grid& grid, double dt, RunArtifacts& out)
{
    const std::size_t n1 = grid.n1();
    const std::size_t n2 = grid.n2();
    const double vol = grid.cell_volume();
    double gu = 0.0;
    double gb = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            if (i + 1 < n1) {
                const double d = (u(i + 1, j) - u(i, j)) / grid.dx1();
                gu += d * d;
            }
            const double lo = j == 0 ? dirichlet_ghost(spec, grid, i, -1) : u(i, j - 1);
            const double d = (u(i, j) - lo) / grid.dx2();
            const double db = (spec.b(u(i, j)) - spec.b(lo)) / grid.dx2();
            gu += d * d;
            gb += db * db;
            if (j + 1 == n2) {
                const double hi = dirichlet_ghost(spec, grid, i, +1);
                const double dt2 = (hi - u(i, j)) / grid.dx2();
                const double db2 = (spec.b(hi) - spec.b(u(i, j))) / grid.dx2();
                gu += dt2 * dt2;
                gb += db2 * db2;
            }
        }
    }
    out.grad_u_sq += dt * vol * gu;
    out.grad_b_sq += dt * vol * gb;
}

StepDiagnostics diagnose(double t, double dt, const Field& u, const StepResult* r, const Grid& grid)
{
    StepDiagnostics d;
    d.t = t;
    d.dt = dt;
    const auto [lo, hi] = std::minmax_element(u.values().begin(), u.values().end());
    d.min = *lo;
    d.max = *hi;
    double m = 0.0;
    for (double v : u.values()) {
        m += v;
    }
    d.mass = m * grid.cell_volume();
    if (r != nullptr) {
        d.gamma1_outflow = r->gamma1_outflow;
        d.gamma2_outflow = r->gamma2_outflow;
    }
    return d;
}

}  // namespace

RunArtifacts run_from(const Field& initial, const ProblemSpec& spec, const Grid& grid, const SolverConfig& config,
                      const StepObserver& observer)
{
    if (!(config.t_end > 0.0)) {
        throw Error("solver: t_end must be > 0");
    }
    if (initial.n1() != grid.n1() || initial.n2() != grid.n2()) {
        throw Error("solver: initial field does not match the grid");
    }
    RunArtifacts out;
    out.grid = grid.spec();
    out.spec = spec;
    out.config = config;

    std::vector<double> targets;
    for (double t : config.snapshot_times) {
        if (t > 0.0 && t < config.t_end) {
            targets.push_back(t);
        }
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    targets.push_back(config.t_end);

    const double dt_stable = stable_dt(spec, grid, config);
    // The range guard applies only where the maximum principle is claimed.
    const bool guard = validate_flux_pinning(spec).pass;
    const double slack = 1e-10 * (spec.u_max - spec.u_min);
    auto in_range = [&](const Field& u) {
        for (double v : u.values()) {
            if (v < spec.u_min - slack || v > spec.u_max + slack) {
                return false;
            }
        }
        return true;
    };

    Field u = initial;
    double t = 0.0;
    out.snapshots.push_back({0.0, u});
    out.diagnostics.push_back(diagnose(0.0, 0.0, u, nullptr, grid));
    if (config.keep_trajectory) {
        out.trajectory_times.push_back(0.0);
        out.trajectory.push_back(u);
    }

    std::size_t next_target = 0;
    while (next_target < targets.size()) {
        const double target = targets[next_target];
        double dt = std::min(dt_stable, target - t);
        bool lands = dt == target - t;
        // Avoid a sliver step right before a snapshot time.
        if (!lands && target - t - dt < 1e-9 * dt_stable) {
            dt = target - t;
            lands = true;
        }
        StepResult r = step(u, spec, grid, config, dt);
        if (guard && !in_range(r.next)) {
            ++out.rejected_steps;
            dt *= 0.5;
            lands = false;
            r = step(u, spec, grid, config, dt);
            if (!in_range(r.next)) {
                std::ostringstream msg;
                msg << "solver: state left [u_min, u_max] at t=" << t << " after retry";
                throw Error(msg.str());
            }
        }
        accumulate_energy(u, spec, grid, dt, out);
        if (observer) {
            observer(t, dt, u, r.next);
        }
        const double t_next = lands ? target : t + dt;
        out.dt_history.push_back(dt);
        out.diagnostics.push_back(diagnose(t_next, dt, r.next, &r, grid));
        u = std::move(r.next);
        t = t_next;
        if (config.keep_trajectory) {
            out.trajectory_times.push_back(t);
            out.trajectory.push_back(u);
        }
        if (lands) {
            out.snapshots.push_back({t, u});
            ++next_target;
        }
    }
    return out;
}

RunArtifacts run(const ProblemSpec& spec, const Grid& grid, const SolverConfig& config, const StepObserver& observer)
{
    return run_from(sample_initial(spec, grid), spec, grid, config, observer);
}

unsigned thread_budget()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DEGENFLOW_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            hw = std::min(hw, static_cast<unsigned>(v));
        }
    }
    return hw;
}

ContinuationTable viscosity_continuation(const ProblemSpec& spec, const Grid& grid, const SolverConfig& base,
                                         const std::vector<double>& eps_list)
{
    if (eps_list.empty()) {
        throw Error("viscosity_continuation: empty eps list");
    }
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!(eps_list[k] > 0.0) || (k > 0 && !(eps_list[k] < eps_list[k - 1]))) {
            throw Error("viscosity_continuation: eps list must be positive and strictly decreasing");
        }
    }
    std::vector<RunArtifacts> runs(eps_list.size());
    auto do_run = [&](std::size_t k) {
        SolverConfig cfg = base;
        cfg.eps = eps_list[k];
        cfg.keep_trajectory = false;
        runs[k] = run(spec, grid, cfg);
    };
    const unsigned workers = thread_budget();
    if (workers <= 1) {
        for (std::size_t k = 0; k < eps_list.size(); ++k) {
            do_run(k);
        }
    } else {
        for (std::size_t start = 0; start < eps_list.size(); start += workers) {
            std::vector<std::future<void>> jobs;
            for (std::size_t k = start; k < std::min(eps_list.size(), start + workers); ++k) {
                jobs.push_back(std::async(std::launch::async, do_run, k));
            }
            for (auto& j : jobs) {
                j.get();
            }
        }
    }

    ContinuationTable table;
    table.eps = eps_list;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        table.eps_grad_sq.push_back(eps_list[k] * runs[k].grad_u_sq);
        table.grad_b_sq.push_back(runs[k].grad_b_sq);
        table.finals.push_back(runs[k].final_snapshot().u);
        if (k > 0) {
            table.pairwise_l1.push_back(l1_norm(table.finals[k - 1], table.finals[k], grid));
        }
    }
    return table;
}

}  // namespace degenflow
