#include "degenflow/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace degenflow {

namespace {

struct Levels {
    std::vector<double> times;
    std::vector<const Field*> states;
};

Levels levels_of(const RunArtifacts& run)
{
    Levels l;
    if (!run.trajectory.empty()) {
        l.times = run.trajectory_times;
        for (const auto& f : run.trajectory) {
            l.states.push_back(&f);
        }
    } else {
        for (const auto& s : run.snapshots) {
            l.times.push_back(s.t);
            l.states.push_back(&s.u);
        }
    }
    return l;
}

/// Trapezoid weights on a sorted list of times.
std::vector<double> trapezoid(const std::vector<double>& t)
{
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t n = 0; n + 1 < t.size(); ++n) {
        const double h = 0.5 * (t[n + 1] - t[n]);
        w[n] += h;
        w[n + 1] += h;
    }
    return w;
}

}  // namespace

TraceProfile extract_trace_profile(const RunArtifacts& run, const std::vector<double>& s_values)
{
    if (s_values.size() < 2) {
        throw Error("trace profile: need at least two depths");
    }
    for (std::size_t k = 1; k < s_values.size(); ++k) {
        if (!(s_values[k] < s_values[k - 1])) {
            throw Error("trace profile: depths must be strictly decreasing");
        }
    }
    const Grid grid(run.grid);
    if (s_values.back() < 0.5 * grid.dx1() * (1.0 - 1e-12)) {
        throw Error("trace profile: depth below dx1/2 is not resolvable");
    }
    const std::vector<DeformationLayer> layers = deformation_layers(grid, s_values);
    for (std::size_t k = 1; k < layers.size(); ++k) {
        if (layers[k].column_left == layers[k - 1].column_left) {
            std::ostringstream msg;
            msg << "trace profile: depths " << s_values[k - 1] << " and " << s_values[k]
                << " resolve to the same cell column";
            throw Error(msg.str());
        }
    }
    const Levels lv = levels_of(run);
    TraceProfile out;
    out.s_values = s_values;
    out.times = lv.times;
    for (const auto& layer : layers) {
        std::vector<std::vector<double>> prof;
        for (const Field* u : lv.states) {
            std::vector<double> row;
            for (const auto& path : layer.paths) {
                for (std::size_t c : path) {
                    row.push_back((*u)[c]);
                }
            }
            prof.push_back(std::move(row));
        }
        out.profiles.push_back(std::move(prof));
    }
    const std::vector<double> w = trapezoid(lv.times);
    for (std::size_t k = 0; k + 1 < out.profiles.size(); ++k) {
        double gap = 0.0;
        for (std::size_t n = 0; n < lv.times.size(); ++n) {
            const auto& a = out.profiles[k][n];
            const auto& b = out.profiles[k + 1][n];
            double s = 0.0;
            for (std::size_t m = 0; m < a.size(); ++m) {
                s += std::abs(a[m] - b[m]);
            }
            gap += w[n] * s * grid.dx2();
        }
        out.l1_gaps.push_back(gap);
    }
    out.u_tau = out.profiles.back();
    return out;
}

bool gaps_decreasing(const std::vector<double>& gaps, double noise)
{
    for (std::size_t k = 1; k < gaps.size(); ++k) {
        if (gaps[k] > gaps[k - 1] * (1.0 + noise)) {
            return false;
        }
    }
    return true;
}

VerificationReport check_trace_profile(const TraceProfile& profile, double noise)
{
    VerificationReport rep;
    CheckEntry e;
    e.id = "trace.gamma1";
    double worst = 0.0;
    for (std::size_t k = 1; k < profile.l1_gaps.size(); ++k) {
        const double prev = profile.l1_gaps[k - 1];
        const double growth = prev > 0.0 ? profile.l1_gaps[k] / prev - 1.0 : (profile.l1_gaps[k] > 0.0 ? 1.0 : 0.0);
        worst = std::max(worst, growth);
    }
    e.defect = -worst;
    e.tolerance = noise;
    e.status = gaps_decreasing(profile.l1_gaps, noise) ? Status::Pass : Status::Fail;
    std::ostringstream det;
    det.precision(6);
    det << "gaps=";
    for (std::size_t k = 0; k < profile.l1_gaps.size(); ++k) {
        det << (k ? "," : "") << profile.l1_gaps[k];
    }
    e.detail = det.str();
    rep.add(e);
    return rep;
}

VectorField sample_vector_field(const PointField& F, const Grid& grid)
{
    VectorField v{grid.make_field(), grid.make_field()};
    for (std::size_t i = 0; i < grid.n1(); ++i) {
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            const auto f = F(grid.x1(i), grid.x2(j));
            v.c1(i, j) = f[0];
            v.c2(i, j) = f[1];
        }
    }
    return v;
}

namespace {

// Centered differences inside, first-order one-sided at the ends.
double diff1(const Field& f, std::size_t i, std::size_t j, std::size_t n1, double h)
{
    if (i == 0) {
        return (f(1, j) - f(0, j)) / h;
    }
    if (i + 1 == n1) {
        return (f(i, j) - f(i - 1, j)) / h;
    }
    return (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
}

double diff2(const Field& f, std::size_t i, std::size_t j, std::size_t n2, double h)
{
    if (j == 0) {
        return (f(i, 1) - f(i, 0)) / h;
    }
    if (j + 1 == n2) {
        return (f(i, j) - f(i, j - 1)) / h;
    }
    return (f(i, j + 1) - f(i, j - 1)) / (2.0 * h);
}

}  // namespace

GaussGreenResult gauss_green_check(const VectorField& F, const SmoothFn& g, const Grid& grid)
{
    const std::size_t n1 = grid.n1();
    const std::size_t n2 = grid.n2();
    const double vol = grid.cell_volume();
    GaussGreenResult r;
    double max_f = 0.0;
    double max_df = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const double x = grid.x1(i);
            const double y = grid.x2(j);
            const auto dg = g.grad(x, y);
            const double f1 = F.c1(i, j);
            const double f2 = F.c2(i, j);
            const double d11 = diff1(F.c1, i, j, n1, grid.dx1());
            const double d12 = diff2(F.c1, i, j, n2, grid.dx2());
            const double d21 = diff1(F.c2, i, j, n1, grid.dx1());
            const double d22 = diff2(F.c2, i, j, n2, grid.dx2());
            r.volume_grad += (dg[0] * f1 + dg[1] * f2) * vol;
            r.volume_div += g.value(x, y) * (d11 + d22) * vol;
            max_f = std::max(max_f, std::hypot(f1, f2));
            max_df = std::max(max_df, std::sqrt(d11 * d11 + d12 * d12 + d21 * d21 + d22 * d22));
        }
    }
    for (const BoundaryFace& face : grid.boundary_faces()) {
        const std::size_t i = face.cell / n2;
        const std::size_t j = face.cell % n2;
        double x = grid.x1(i);
        double y = grid.x2(j);
        double normal;
        double length;
        if (face.axis == Axis::X1) {
            x += 0.5 * face.normal_sign * grid.dx1();
            normal = face.normal_sign * F.c1[face.cell];
            length = grid.dx2();
        } else {
            y += 0.5 * face.normal_sign * grid.dx2();
            normal = face.normal_sign * F.c2[face.cell];
            length = grid.dx1();
        }
        r.pairing += g.value(x, y) * normal * length;
    }
    r.residual = std::abs(r.volume_grad + r.volume_div - r.pairing);
    r.field_norm = max_f + max_df;
    return r;
}

GaussGreenRefinement gauss_green_refinement(const PointField& F, const SmoothFn& g, const GridSpec& coarse)
{
    GridSpec fine = coarse;
    fine.n1 *= 2;
    fine.n2 *= 2;
    const Grid gc(coarse);
    const Grid gf(fine);
    GaussGreenRefinement out;
    out.coarse = gauss_green_check(sample_vector_field(F, gc), g, gc);
    out.fine = gauss_green_check(sample_vector_field(F, gf), g, gf);
    out.ratio = out.fine.residual > 0.0 ? out.coarse.residual / out.fine.residual : 0.0;
    return out;
}

BoundaryTraceEstimate boundary_layer_trace(const VectorField& F, const SmoothFn& g, const Grid& grid,
                                           const std::vector<double>& eps_list)
{
    if (eps_list.empty()) {
        throw Error("boundary_layer_trace: empty eps list");
    }
    const double h = std::min(grid.dx1(), grid.dx2());
    const GridSpec& gs = grid.spec();
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        const double e = eps_list[k];
        const double mult = e / h;
        if (e < h * (1.0 - 1e-9)) {
            throw Error("boundary_layer_trace: eps below the grid resolution");
        }
        if (std::abs(mult - std::round(mult)) > 1e-9 * mult) {
            throw Error("boundary_layer_trace: eps must be a multiple of the cell size");
        }
        if (k > 0 && !(e < eps_list[k - 1])) {
            throw Error("boundary_layer_trace: eps list must be decreasing");
        }
        if (2.0 * e > std::min(gs.extent1.length(), gs.extent2.length())) {
            throw Error("boundary_layer_trace: eps exceeds half the domain");
        }
    }
    BoundaryTraceEstimate out;
    out.eps = eps_list;
    const double vol = grid.cell_volume();
    for (double e : eps_list) {
        double s = 0.0;
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            for (std::size_t j = 0; j < grid.n2(); ++j) {
                const double x = grid.x1(i);
                const double y = grid.x2(j);
                const double d[4] = {x - gs.extent1.lo, gs.extent1.hi - x, y - gs.extent2.lo, gs.extent2.hi - y};
                const double m = *std::min_element(d, d + 4);
                if (m >= e) {
                    continue;
                }
                // grad m: inward normal of the nearest side, averaged over ties.
                const double inward[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                double gm[2] = {0.0, 0.0};
                int ties = 0;
                for (int q = 0; q < 4; ++q) {
                    if (d[q] - m <= 1e-12 * h) {
                        gm[0] += inward[q][0];
                        gm[1] += inward[q][1];
                        ++ties;
                    }
                }
                gm[0] /= ties;
                gm[1] /= ties;
                s += g.value(x, y) * (gm[0] * F.c1(i, j) + gm[1] * F.c2(i, j)) * vol;
            }
        }
        out.values.push_back(-s / e);
    }
    if (eps_list.size() == 1) {
        out.limit = out.values[0];
    } else {
        double se = 0.0, sv = 0.0, see = 0.0, sev = 0.0;
        const double n = static_cast<double>(eps_list.size());
        for (std::size_t k = 0; k < eps_list.size(); ++k) {
            se += eps_list[k];
            sv += out.values[k];
            see += eps_list[k] * eps_list[k];
            sev += eps_list[k] * out.values[k];
        }
        const double slope = (n * sev - se * sv) / (n * see - se * se);
        out.limit = (sv - slope * se) / n;
    }
    out.pairing = gauss_green_check(F, g, grid).pairing;
    out.agreement = std::abs(out.limit - out.pairing);
    return out;
}

TimeTraceResult time_zero_trace(const RunArtifacts& run, double k, double tol_scale)
{
    const Grid grid(run.grid);
    const Levels lv = levels_of(run);
    if (lv.states.size() < 3) {
        throw Error("time_zero_trace: run has no early time levels");
    }
    const Field& u0 = *lv.states.front();
    const std::size_t cells = u0.size();
    const double tau0 = lv.times[1];
    // Band averages over [0, tau] by the trapezoid rule, tau = tau0, 2 tau0.
    std::vector<double> taus;
    std::vector<Field> abs_avg;
    std::vector<Field> avg;
    for (double tau = tau0; taus.size() < 2; tau *= 2.0) {
        Field a = grid.make_field();
        Field b = grid.make_field();
        std::size_t n = 0;
        for (; n + 1 < lv.times.size() && lv.times[n + 1] <= tau * (1.0 + 1e-9); ++n) {
            const double w = 0.5 * (lv.times[n + 1] - lv.times[n]);
            const Field& p = *lv.states[n];
            const Field& q = *lv.states[n + 1];
            for (std::size_t c = 0; c < cells; ++c) {
                a[c] += w * (std::abs(p[c] - k) + std::abs(q[c] - k));
                b[c] += w * (p[c] + q[c]);
            }
        }
        const double reached = lv.times[n];
        if (std::abs(reached - tau) > 1e-9 * tau) {
            throw Error("time_zero_trace: early time levels are not dyadic multiples of the first step");
        }
        for (std::size_t c = 0; c < cells; ++c) {
            a[c] /= tau;
            b[c] /= tau;
        }
        taus.push_back(tau);
        abs_avg.push_back(std::move(a));
        avg.push_back(std::move(b));
    }
    TimeTraceResult r;
    r.k = k;
    r.band_widths = taus;
    const double vol = grid.cell_volume();
    for (std::size_t c = 0; c < cells; ++c) {
        const double tr_abs = 2.0 * abs_avg[0][c] - abs_avg[1][c];
        const double tr = 2.0 * avg[0][c] - avg[1][c];
        r.excess += std::max(0.0, tr_abs - std::abs(u0[c] - k)) * vol;
        r.mismatch += std::abs(tr - u0[c]) * vol;
    }
    double dt = 0.0;
    for (double d : run.dt_history) {
        dt = std::max(dt, d);
    }
    const double area = run.grid.extent1.length() * run.grid.extent2.length();
    const double range = run.spec.u_max - run.spec.u_min;
    r.tolerance = (std::max(grid.dx1(), grid.dx2()) + dt) * area * range * tol_scale;
    return r;
}

VerificationReport check_time_zero_trace(const RunArtifacts& run, const std::vector<double>& k_list,
                                         double tol_scale)
{
    VerificationReport rep;
    for (std::size_t ik = 0; ik < k_list.size(); ++ik) {
        const TimeTraceResult r = time_zero_trace(run, k_list[ik], tol_scale);
        char id[48];
        std::snprintf(id, sizeof id, "trace.time0.k%02zu", ik);
        CheckEntry e;
        e.id = id;
        e.defect = -r.excess;
        e.tolerance = r.tolerance;
        e.status = r.excess <= r.tolerance ? Status::Pass : Status::Fail;
        std::ostringstream det;
        det << "k=" << k_list[ik] << " excess=" << r.excess;
        e.detail = det.str();
        rep.add(e);
        if (ik == 0) {
            CheckEntry m;
            m.id = "trace.time0.identity";
            m.defect = -r.mismatch;
            m.tolerance = r.tolerance;
            m.status = r.mismatch <= r.tolerance ? Status::Pass : Status::Fail;
            m.detail = "int |trace of u at t=0 - u0|";
            rep.add(m);
        }
    }
    return rep;
}

}  // namespace degenflow
