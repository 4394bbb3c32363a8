#include "degenflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "degenflow/entropy.hpp"

namespace degenflow {

const char* to_string(Status s)
{
    switch (s) {
    case Status::Pass:
        return "pass";
    case Status::Fail:
        return "fail";
    case Status::Info:
        return "info";
    }
    return "?";
}

void VerificationReport::add(CheckEntry e)
{
    if (!std::isfinite(e.defect)) {
        e.detail += e.detail.empty() ? "non-finite defect" : "; non-finite defect";
        e.defect = std::numeric_limits<double>::max();
        e.status = Status::Fail;
    }
    entries.push_back(std::move(e));
}

void VerificationReport::merge(const VerificationReport& other)
{
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

void VerificationReport::finalize()
{
    std::stable_sort(entries.begin(), entries.end(),
                     [](const CheckEntry& a, const CheckEntry& b) { return a.id < b.id; });
    for (std::size_t k = 1; k < entries.size(); ++k) {
        if (entries[k].id == entries[k - 1].id) {
            throw Error("report: duplicate check id " + entries[k].id);
        }
    }
}

bool VerificationReport::all_pass() const
{
    return std::none_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.status == Status::Fail; });
}

std::size_t VerificationReport::count(Status s) const
{
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [s](const CheckEntry& e) { return e.status == s; }));
}

const CheckEntry* VerificationReport::find(const std::string& id) const
{
    for (const auto& e : entries) {
        if (e.id == id) {
            return &e;
        }
    }
    return nullptr;
}

double Profile::value(double x) const
{
    switch (kind) {
    case Kind::One:
        return 1.0;
    case Kind::Bump:
        return bump_profile((x - center) / radius);
    case Kind::Ramp:
        return (x - lo) / (hi - lo);
    case Kind::Cosine:
        return std::cos(std::numbers::pi * (x - lo) / (hi - lo));
    }
    return 0.0;
}

double Profile::deriv(double x) const
{
    switch (kind) {
    case Kind::One:
        return 0.0;
    case Kind::Bump: {
        const double r = (x - center) / radius;
        if (std::abs(r) >= 1.0) {
            return 0.0;
        }
        const double s = 1.0 - r * r;
        return -6.0 * r * s * s / radius;
    }
    case Kind::Ramp:
        return 1.0 / (hi - lo);
    case Kind::Cosine: {
        const double w = std::numbers::pi / (hi - lo);
        return -w * std::sin(w * (x - lo));
    }
    }
    return 0.0;
}

double TestFunction::value(double tt, double a, double b) const { return t.value(tt) * x1.value(a) * x2.value(b); }
double TestFunction::d_t(double tt, double a, double b) const { return t.deriv(tt) * x1.value(a) * x2.value(b); }
double TestFunction::d_1(double tt, double a, double b) const { return t.value(tt) * x1.deriv(a) * x2.value(b); }
double TestFunction::d_2(double tt, double a, double b) const { return t.value(tt) * x1.value(a) * x2.deriv(b); }

Field TestFunction::spatial(const Grid& grid) const
{
    Field s = grid.make_field();
    for (std::size_t i = 0; i < grid.n1(); ++i) {
        const double a = x1.value(grid.x1(i));
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            s(i, j) = a * x2.value(grid.x2(j));
        }
    }
    return s;
}

namespace {

std::string fmt(const char* pattern, double a, double b)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

Profile time_bump(double t_end) { return Profile::bump(0.5 * t_end, 0.45 * t_end); }

}  // namespace

std::vector<TestFunction> interior_bumps(const GridSpec& g, double t_end)
{
    std::vector<TestFunction> out;
    const double centers[] = {0.35, 0.5, 0.65};
    const double widths[] = {0.12, 0.2, 0.28};
    for (double c : centers) {
        for (double w : widths) {
            TestFunction phi;
            phi.id = fmt("bump_c%.2f_w%.2f", c, w);
            phi.t = time_bump(t_end);
            phi.x1 = Profile::bump(g.extent1.lo + c * g.extent1.length(), w * g.extent1.length());
            phi.x2 = Profile::bump(g.extent2.lo + c * g.extent2.length(), w * g.extent2.length());
            out.push_back(phi);
        }
    }
    return out;
}

std::vector<TestFunction> gamma1_functions(const GridSpec& g, double t_end)
{
    std::vector<TestFunction> out;
    const Interval& e1 = g.extent1;
    const Profile shapes[] = {Profile::one(), Profile::ramp(e1.lo, e1.hi), Profile::cosine(e1.lo, e1.hi)};
    const char* names[] = {"one", "ramp", "cos"};
    const double centers[] = {0.35, 0.5, 0.65};
    for (int s = 0; s < 3; ++s) {
        for (double c : centers) {
            TestFunction phi;
            phi.id = std::string("g1_") + names[s] + fmt("_c%.2f", c, 0.0);
            phi.t = time_bump(t_end);
            phi.x1 = shapes[s];
            phi.x2 = Profile::bump(g.extent2.lo + c * g.extent2.length(), 0.25 * g.extent2.length());
            out.push_back(phi);
        }
    }
    return out;
}

std::vector<TestFunction> gamma2_functions(const GridSpec& g, double t_end)
{
    std::vector<TestFunction> out;
    const double centers[] = {0.35, 0.5, 0.65};
    const double widths[] = {0.15, 0.25, 0.35};
    const Interval& e2 = g.extent2;
    for (int side = 0; side < 2; ++side) {
        for (double c : centers) {
            for (double w : widths) {
                TestFunction phi;
                phi.id = std::string(side == 0 ? "g2lo" : "g2hi") + fmt("_c%.2f_w%.2f", c, w);
                phi.t = time_bump(t_end);
                phi.x1 = Profile::bump(g.extent1.lo + c * g.extent1.length(), 0.25 * g.extent1.length());
                phi.x2 = Profile::bump(side == 0 ? e2.lo : e2.hi, w * e2.length());
                out.push_back(phi);
            }
        }
    }
    return out;
}

double test_norm(const TestFunction& phi, const Grid& grid, const std::vector<double>& times)
{
    // Separable: integrate each factor and its derivative once.
    auto integrals = [](const Profile& p, auto&& point, std::size_t n, double w) {
        double v = 0.0;
        double d = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            v += std::abs(p.value(point(k))) * w;
            d += std::abs(p.deriv(point(k))) * w;
        }
        return std::pair{v, d};
    };
    const auto [a1, d1] = integrals(phi.x1, [&](std::size_t i) { return grid.x1(i); }, grid.n1(), grid.dx1());
    const auto [a2, d2] = integrals(phi.x2, [&](std::size_t j) { return grid.x2(j); }, grid.n2(), grid.dx2());
    double at = 0.0;
    double dt = 0.0;
    for (std::size_t n = 0; n + 1 < times.size(); ++n) {
        const double h = times[n + 1] - times[n];
        at += std::abs(phi.t.value(times[n])) * h;
        dt += std::abs(phi.t.deriv(times[n])) * h;
    }
    return at * a1 * a2 + dt * a1 * a2 + at * d1 * a2 + at * a1 * d2;
}

double value_quantum(const ProblemSpec& spec) { return (spec.u_max - spec.u_min) / 1024.0; }

std::vector<double> spread_levels(const ProblemSpec& spec, int count)
{
    std::vector<double> out;
    for (int k = 1; k <= count; ++k) {
        out.push_back(spec.u_min + (spec.u_max - spec.u_min) * k / (count + 1));
    }
    return out;
}

namespace {

/// Time levels of a run: the full trajectory when stored, else the snapshots.
struct Series {
    std::vector<double> times;
    std::vector<const Field*> states;
    bool full = false;
};

Series series_of(const RunArtifacts& run)
{
    Series s;
    if (!run.trajectory.empty()) {
        s.times = run.trajectory_times;
        for (const auto& f : run.trajectory) {
            s.states.push_back(&f);
        }
        s.full = true;
    } else {
        for (const auto& snap : run.snapshots) {
            s.times.push_back(snap.t);
            s.states.push_back(&snap.u);
        }
    }
    return s;
}

CheckEntry needs_trajectory(const std::string& id)
{
    return {id, Status::Info, 0.0, 0.0, "skipped: run has no stored trajectory"};
}

double grid_dt(const RunArtifacts& run)
{
    double m = 0.0;
    for (double d : run.dt_history) {
        m = std::max(m, d);
    }
    return m;
}

}  // namespace

VerificationReport check_max_principle(const RunArtifacts& run, double tol_scale)
{
    const ProblemSpec& spec = run.spec;
    const double tol = 1e-12 * (spec.u_max - spec.u_min) * tol_scale;
    double margin = std::numeric_limits<double>::infinity();
    double worst_t = 0.0;
    std::size_t worst_cell = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    auto scan = [&](double t, const Field& u) {
        for (std::size_t c = 0; c < u.size(); ++c) {
            const double m = std::min(u[c] - spec.u_min, spec.u_max - u[c]);
            lo = std::min(lo, u[c]);
            hi = std::max(hi, u[c]);
            if (m < margin || std::isnan(u[c])) {
                margin = std::isnan(u[c]) ? -std::numeric_limits<double>::infinity() : m;
                worst_t = t;
                worst_cell = c;
            }
        }
    };
    for (const auto& s : run.snapshots) {
        scan(s.t, s.u);
    }
    for (std::size_t n = 0; n < run.trajectory.size(); ++n) {
        scan(run.trajectory_times[n], run.trajectory[n]);
    }
    VerificationReport rep;
    CheckEntry e;
    e.id = "max_principle";
    e.defect = margin;
    e.tolerance = tol;
    e.status = margin >= -tol ? Status::Pass : Status::Fail;
    std::ostringstream d;
    d.precision(17);
    const std::size_t n2 = static_cast<std::size_t>(run.grid.n2);
    d << "min=" << lo << " max=" << hi << " worst t=" << worst_t << " cell=(" << worst_cell / n2 << ","
      << worst_cell % n2 << ")";
    e.detail = d.str();
    rep.add(e);
    return rep;
}



namespace {

/// Test functions grouped by time factor so time sums run once per group.
struct PhiGroups {
    std::vector<Profile> thetas;
    std::vector<std::size_t> group_of;
    std::vector<Field> spatial;
};

PhiGroups group_phis(const std::vector<TestFunction>& phis, const Grid& grid)
{
    PhiGroups g;
    for (const auto& phi : phis) {
        auto it = std::find(g.thetas.begin(), g.thetas.end(), phi.t);
        if (it == g.thetas.end()) {
            g.thetas.push_back(phi.t);
            it = g.thetas.end() - 1;
        }
        g.group_of.push_back(static_cast<std::size_t>(it - g.thetas.begin()));
        g.spatial.push_back(phi.spatial(grid));
    }
    return g;
}

struct Cache {
    std::vector<double> f1;
    std::vector<double> f2;
    std::vector<double> b22;
};

Cache cache_of(const Field& u, const ProblemSpec& spec)
{
    Cache c;
    c.f1.resize(u.size());
    c.f2.resize(u.size());
    c.b22.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        c.f1[k] = spec.flux_f1(u[k]);
        c.f2[k] = spec.flux_f2(u[k]);
        c.b22[k] = spec.diff_b22(u[k]);
    }
    return c;
}

/// Net inflow through interior faces, times face length. flux1(L, R) and
/// flux2(L, R) take cell indices of the two sides.
template <class X1, class X2>
void interior_inflow(Field& in, const Grid& grid, X1&& flux1, X2&& flux2)
{
    std::fill(in.values().begin(), in.values().end(), 0.0);
    const std::size_t n1 = grid.n1();
    const std::size_t n2 = grid.n2();
    for (std::size_t i = 1; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const std::size_t l = grid.index(i - 1, j);
            const std::size_t r = grid.index(i, j);
            const double F = flux1(l, r) * grid.dx2();
            in[l] -= F;
            in[r] += F;
        }
    }
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 1; j < n2; ++j) {
            const std::size_t l = grid.index(i, j - 1);
            const std::size_t r = grid.index(i, j);
            const double F = flux2(l, r) * grid.dx1();
            in[l] -= F;
            in[r] += F;
        }
    }
}

double pair_sum(const Field& a, const Field& b)
{
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        s += a[c] * b[c];
    }
    return s;
}

struct EntropySums {
    std::vector<std::vector<double>> left;               // [k][phi]
    std::vector<std::vector<std::vector<double>>> diss;  // [k][delta][phi]
    std::vector<double> weak;                            // [phi]
};

// Space-time sums of the scheme's discrete entropy identity. With u^n the
// stored states and S the spatial factor of phi,
//   left = sum_n sum_c [V |u^{n+1} - k| (phi^{n+1} - phi^n) + dt phi^n In_G],
// In_G the net inflow of the Crandall-Majda entropy flux
//   G(a, b) = F(a v k, b v k) - F(a ^ k, b ^ k).
EntropySums entropy_sums(const RunArtifacts& run, const std::vector<double>& ks, const std::vector<TestFunction>& phis,
                         const std::vector<double>& deltas)
{
    const Grid grid(run.grid);
    const ProblemSpec& spec = run.spec;
    const FluxScheme scheme(spec, grid, run.config.eps);
    const double a1 = scheme.alpha1();
    const double a2 = scheme.alpha2();
    const double eps = run.config.eps;
    const double h1 = grid.dx1();
    const double h2 = grid.dx2();
    const double vol = grid.cell_volume();
    const PhiGroups groups = group_phis(phis, grid);
    const std::size_t ng = groups.thetas.size();
    const std::size_t nk = ks.size();
    const std::size_t nd = deltas.size();

    std::vector<Field> acc_k(nk * ng, grid.make_field());
    std::vector<Field> acc_w(ng, grid.make_field());
    std::vector<Field> acc_d(nk * nd * ng, grid.make_field());  // x''-face (i, j) sits below cell (i, j)
    Field in = grid.make_field();

    auto num1 = [&](double a, double b, double fa, double fb) {
        return 0.5 * (fa + fb) - 0.5 * a1 * (b - a) - eps * (b - a) / h1;
    };
    auto num2 = [&](double a, double b, double fa, double fb, double ba, double bb) {
        return 0.5 * (fa + fb) - 0.5 * a2 * (b - a) - (bb - ba) / h2 - eps * (b - a) / h2;
    };

    const auto& times = run.trajectory_times;
    for (std::size_t n = 0; n + 1 < run.trajectory.size(); ++n) {
        const Field& u = run.trajectory[n];
        const Field& v = run.trajectory[n + 1];
        const double dt = times[n + 1] - times[n];
        const Cache c = cache_of(u, spec);
        std::vector<double> th0(ng);
        std::vector<double> th1(ng);
        for (std::size_t g = 0; g < ng; ++g) {
            th0[g] = groups.thetas[g].value(times[n]);
            th1[g] = groups.thetas[g].value(times[n + 1]);
        }

        interior_inflow(
            in, grid, [&](std::size_t l, std::size_t r) { return num1(u[l], u[r], c.f1[l], c.f1[r]); },
            [&](std::size_t l, std::size_t r) { return num2(u[l], u[r], c.f2[l], c.f2[r], c.b22[l], c.b22[r]); });
        for (std::size_t g = 0; g < ng; ++g) {
            const double dth = (th1[g] - th0[g]) * vol;
            const double w = th0[g] * dt;
            Field& acc = acc_w[g];
            for (std::size_t q = 0; q < u.size(); ++q) {
                acc[q] += dth * v[q] + w * in[q];
            }
        }

        for (std::size_t ik = 0; ik < nk; ++ik) {
            const double k = ks[ik];
            const double fk1 = spec.flux_f1(k);
            const double fk2 = spec.flux_f2(k);
            const double bk = spec.diff_b22(k);
            auto hi1 = [&](std::size_t q) { return u[q] > k ? c.f1[q] : fk1; };
            auto lo1 = [&](std::size_t q) { return u[q] < k ? c.f1[q] : fk1; };
            auto hi2 = [&](std::size_t q) { return u[q] > k ? c.f2[q] : fk2; };
            auto lo2 = [&](std::size_t q) { return u[q] < k ? c.f2[q] : fk2; };
            auto hib = [&](std::size_t q) { return u[q] > k ? c.b22[q] : bk; };
            auto lob = [&](std::size_t q) { return u[q] < k ? c.b22[q] : bk; };
            interior_inflow(
                in, grid,
                [&](std::size_t l, std::size_t r) {
                    return num1(std::max(u[l], k), std::max(u[r], k), hi1(l), hi1(r)) -
                           num1(std::min(u[l], k), std::min(u[r], k), lo1(l), lo1(r));
                },
                [&](std::size_t l, std::size_t r) {
                    return num2(std::max(u[l], k), std::max(u[r], k), hi2(l), hi2(r), hib(l), hib(r)) -
                           num2(std::min(u[l], k), std::min(u[r], k), lo2(l), lo2(r), lob(l), lob(r));
                });
            for (std::size_t g = 0; g < ng; ++g) {
                const double dth = (th1[g] - th0[g]) * vol;
                const double w = th0[g] * dt;
                Field& acc = acc_k[ik * ng + g];
                for (std::size_t q = 0; q < u.size(); ++q) {
                    acc[q] += dth * std::abs(v[q] - k) + w * in[q];
                }
            }
            // Dissipation on x''-faces: d_2 sgn_delta(u - k) * d_2 b22(u).
            for (std::size_t id = 0; id < nd; ++id) {
                const double delta = deltas[id];
                for (std::size_t g = 0; g < ng; ++g) {
                    const double w = th0[g] * dt / (h2 * h2);
                    if (w == 0.0) {
                        continue;
                    }
                    Field& acc = acc_d[(ik * nd + id) * ng + g];
                    for (std::size_t i = 0; i < grid.n1(); ++i) {
                        for (std::size_t j = 1; j < grid.n2(); ++j) {
                            const std::size_t l = grid.index(i, j - 1);
                            const std::size_t r = grid.index(i, j);
                            const double ds = sgn_delta(u[r] - k, delta) - sgn_delta(u[l] - k, delta);
                            if (ds != 0.0) {
                                acc[r] += w * ds * (c.b22[r] - c.b22[l]);
                            }
                        }
                    }
                }
            }
        }
    }

    EntropySums out;
    out.left.assign(nk, std::vector<double>(phis.size(), 0.0));
    out.diss.assign(nk, std::vector<std::vector<double>>(nd, std::vector<double>(phis.size(), 0.0)));
    out.weak.assign(phis.size(), 0.0);
    for (std::size_t p = 0; p < phis.size(); ++p) {
        const std::size_t g = groups.group_of[p];
        const Field& S = groups.spatial[p];
        Field face_weight = grid.make_field();
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            for (std::size_t j = 1; j < grid.n2(); ++j) {
                face_weight(i, j) = 0.5 * (S(i, j - 1) + S(i, j)) * vol;
            }
        }
        out.weak[p] = pair_sum(acc_w[g], S);
        for (std::size_t ik = 0; ik < nk; ++ik) {
            out.left[ik][p] = pair_sum(acc_k[ik * ng + g], S);
            for (std::size_t id = 0; id < nd; ++id) {
                out.diss[ik][id][p] = pair_sum(acc_d[(ik * nd + id) * ng + g], face_weight);
            }
        }
    }
    return out;
}

double grid_dx(const GridSpec& g)
{
    const Grid grid(g);
    return std::max(grid.dx1(), grid.dx2());
}

std::vector<double> deltas_for(const ProblemSpec& spec, const std::vector<double>& factors)
{
    std::vector<double> d;
    for (double f : factors) {
        d.push_back(f * value_quantum(spec));
    }
    return d;
}

}  // namespace

EntropyTerms entropy_terms(const RunArtifacts& run, double k, const TestFunction& phi,
                           const std::vector<double>& deltas)
{
    if (run.trajectory.empty()) {
        throw Error("entropy_terms: run has no stored trajectory");
    }
    const EntropySums s = entropy_sums(run, {k}, {phi}, deltas);
    EntropyTerms t;
    t.left = s.left[0][0];
    t.weak = s.weak[0];
    t.dissipation = -std::numeric_limits<double>::infinity();
    for (const auto& d : s.diss[0]) {
        t.dissipation = std::max(t.dissipation, d[0]);
    }
    if (deltas.empty()) {
        t.dissipation = 0.0;
    }
    return t;
}

VerificationReport check_entropy_inequality(const RunArtifacts& run, const std::vector<double>& k_list,
                                            const std::vector<TestFunction>& phi_set, const EntropyOptions& opt)
{
    VerificationReport rep;
    if (run.trajectory.empty()) {
        rep.add(needs_trajectory("entropy"));
        return rep;
    }
    const Grid grid(run.grid);
    const std::vector<double> deltas = deltas_for(run.spec, opt.delta_factors);
    const EntropySums s = entropy_sums(run, k_list, phi_set, deltas);
    const double h = grid_dx(run.grid) + grid_dt(run);
    for (std::size_t p = 0; p < phi_set.size(); ++p) {
        const double norm = test_norm(phi_set[p], grid, run.trajectory_times);
        for (std::size_t ik = 0; ik < k_list.size(); ++ik) {
            char kid[32];
            std::snprintf(kid, sizeof kid, "k%02zu", ik);
            const double left = s.left[ik][p];
            double diss = deltas.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
            for (const auto& d : s.diss[ik]) {
                diss = std::max(diss, d[p]);
            }
            std::ostringstream det;
            det.precision(6);
            det << "k=" << k_list[ik] << " phi=" << phi_set[p].id << " left=" << left << " dissipation=" << diss
                << " (delta set " << opt.delta_factors.size() << " widths, max taken)";

            CheckEntry cell;
            cell.id = std::string("entropy.cell.") + kid + "." + phi_set[p].id;
            cell.defect = left;
            cell.tolerance = opt.cell_tolerance * opt.tol_scale;
            cell.status = left >= -cell.tolerance ? Status::Pass : Status::Fail;
            cell.detail = det.str();
            rep.add(cell);

            CheckEntry full;
            full.id = std::string("entropy.diss.") + kid + "." + phi_set[p].id;
            full.defect = left - diss;
            full.tolerance = opt.c_order * h * norm * opt.tol_scale;
            full.status = full.defect >= -full.tolerance ? Status::Pass : Status::Fail;
            full.detail = det.str();
            rep.add(full);
        }
    }
    return rep;
}

VerificationReport check_kinetic_defect(const RunArtifacts& run, const std::vector<double>& xi_list,
                                        const std::vector<TestFunction>& phi_set, double tol)
{
    VerificationReport rep;
    if (run.trajectory.empty()) {
        rep.add(needs_trajectory("kinetic"));
        return rep;
    }
    // (xi - u)_+ = (|u - xi| - (u - xi)) / 2, so the production splits into
    // half the Kruzhkov left side minus half the conservative residual.
    const EntropySums s = entropy_sums(run, xi_list, phi_set, {});
    for (std::size_t ix = 0; ix < xi_list.size(); ++ix) {
        for (std::size_t p = 0; p < phi_set.size(); ++p) {
            char kid[32];
            std::snprintf(kid, sizeof kid, "xi%02zu", ix);
            CheckEntry e;
            e.id = std::string("kinetic.") + kid + "." + phi_set[p].id;
            e.defect = 0.5 * (s.left[ix][p] - s.weak[p]);
            e.tolerance = tol;
            e.status = e.defect >= -tol ? Status::Pass : Status::Fail;
            std::ostringstream det;
            det << "xi=" << xi_list[ix] << " phi=" << phi_set[p].id;
            e.detail = det.str();
            rep.add(e);
        }
    }
    return rep;
}

namespace {

struct NeumannSums {
    std::vector<double> residual;
    std::vector<double> norm;
    double h = 0.0;
};

// Same summation by parts as the entropy sums, with the physical flux at
// each interior face and nothing through Gamma' (the zero-flux condition).
NeumannSums neumann_sums(const RunArtifacts& run, const std::vector<TestFunction>& phis)
{
    const Grid grid(run.grid);
    const ProblemSpec& spec = run.spec;
    const double eps = run.config.eps;
    const double h1 = grid.dx1();
    const double h2 = grid.dx2();
    const double vol = grid.cell_volume();
    const PhiGroups groups = group_phis(phis, grid);
    const std::size_t ng = groups.thetas.size();
    std::vector<Field> acc(ng, grid.make_field());
    Field in = grid.make_field();
    const auto& times = run.trajectory_times;
    for (std::size_t n = 0; n + 1 < run.trajectory.size(); ++n) {
        const Field& u = run.trajectory[n];
        const Field& v = run.trajectory[n + 1];
        const double dt = times[n + 1] - times[n];
        interior_inflow(
            in, grid,
            [&](std::size_t l, std::size_t r) {
                return spec.flux_f1(0.5 * (u[l] + u[r])) - eps * (u[r] - u[l]) / h1;
            },
            [&](std::size_t l, std::size_t r) {
                return spec.flux_f2(0.5 * (u[l] + u[r])) - (spec.diff_b22(u[r]) - spec.diff_b22(u[l])) / h2 -
                       eps * (u[r] - u[l]) / h2;
            });
        for (std::size_t g = 0; g < ng; ++g) {
            const double th0 = groups.thetas[g].value(times[n]);
            const double th1 = groups.thetas[g].value(times[n + 1]);
            const double dth = (th1 - th0) * vol;
            const double w = th0 * dt;
            for (std::size_t q = 0; q < u.size(); ++q) {
                acc[g][q] += dth * v[q] + w * in[q];
            }
        }
    }
    NeumannSums out;
    out.h = grid_dx(run.grid) + grid_dt(run);
    for (std::size_t p = 0; p < phis.size(); ++p) {
        out.residual.push_back(pair_sum(acc[groups.group_of[p]], groups.spatial[p]));
        out.norm.push_back(test_norm(phis[p], grid, times));
    }
    return out;
}

}  // namespace

VerificationReport check_neumann_weak_form(const RunArtifacts& run, const std::vector<TestFunction>& phi_set,
                                           const WeakFormOptions& opt)
{
    VerificationReport rep;
    if (run.trajectory.empty()) {
        rep.add(needs_trajectory("neumann"));
        return rep;
    }
    const NeumannSums s = neumann_sums(run, phi_set);
    for (std::size_t p = 0; p < phi_set.size(); ++p) {
        CheckEntry e;
        e.id = "neumann." + phi_set[p].id;
        e.defect = -std::abs(s.residual[p]);
        e.tolerance = opt.c_order * s.h * s.norm[p] * opt.tol_scale;
        e.status = e.defect >= -e.tolerance ? Status::Pass : Status::Fail;
        std::ostringstream det;
        det << "residual=" << s.residual[p] << " norm=" << s.norm[p] << " dx+dt=" << s.h;
        e.detail = det.str();
        rep.add(e);
    }
    return rep;
}

double neumann_max_residual(const RunArtifacts& run, const std::vector<TestFunction>& phi_set)
{
    if (run.trajectory.empty()) {
        throw Error("neumann_max_residual: run has no stored trajectory");
    }
    const NeumannSums s = neumann_sums(run, phi_set);
    double m = 0.0;
    for (std::size_t p = 0; p < phi_set.size(); ++p) {
        m = std::max(m, std::abs(s.residual[p]) / s.norm[p]);
    }
    return m;
}

VerificationReport check_dirichlet_inequalities(const RunArtifacts& run, const std::vector<double>& k_list,
                                                const std::vector<TestFunction>& phi_set,
                                                const DirichletOptions& opt)
{
    VerificationReport rep;
    const Grid grid(run.grid);
    const ProblemSpec& spec = run.spec;
    const Series ser = series_of(run);
    const double vol = grid.cell_volume();
    const std::size_t cells = grid.cell_count();
    const Interval& e2 = run.grid.extent2;

    Field a0 = grid.make_field();
    Field mu0 = grid.make_field();
    for (std::size_t i = 0; i < grid.n1(); ++i) {
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            const double a = spec.a0.extended(grid.x1(i), grid.x2(j), e2);
            a0(i, j) = a;
            // |div K(a0, k)|: a0 is constant along x'', leaving the x'-derivative of F1.
            mu0(i, j) = std::abs(spec.flux_f1.d1(a) * spec.a0.d_dx1(grid.x1(i)));
        }
    }

    // Levels beyond the value range are reported as info only.
    std::vector<double> ks = k_list;
    const std::size_t n_inside = ks.size();
    const double range = spec.u_max - spec.u_min;
    ks.push_back(spec.u_min - 0.25 * range);
    ks.push_back(spec.u_max + 0.25 * range);

    const PhiGroups groups = group_phis(phi_set, grid);
    const std::size_t ng = groups.thetas.size();
    const std::size_t nk = ks.size();
    // Per group: time-weighted density and flux fields for (1) and each k.
    std::vector<Field> m9(ng, grid.make_field()), p9a(ng, grid.make_field()), p9b(ng, grid.make_field());
    std::vector<Field> mk(ng * nk, grid.make_field()), pka(ng * nk, grid.make_field()),
        pkb(ng * nk, grid.make_field());
    std::vector<double> theta_int(ng, 0.0);

    for (std::size_t n = 0; n + 1 < ser.states.size(); ++n) {
        const Field& u = *ser.states[n];
        const double t = ser.times[n];
        const double dt = ser.times[n + 1] - t;
        const VectorField K = K_pair(u, a0, grid, spec);
        std::vector<VectorField> H;
        for (double k : ks) {
            H.push_back(H_field(u, k, a0, grid, spec));
        }
        for (std::size_t g = 0; g < ng; ++g) {
            const double th = groups.thetas[g].value(t) * dt;
            const double dth = groups.thetas[g].deriv(t) * dt;
            theta_int[g] += th;
            if (th == 0.0 && dth == 0.0) {
                continue;
            }
            for (std::size_t q = 0; q < cells; ++q) {
                m9[g][q] += dth * std::abs(u[q] - a0[q]);
                p9a[g][q] += th * K.c1[q];
                p9b[g][q] += th * K.c2[q];
            }
            for (std::size_t ik = 0; ik < nk; ++ik) {
                Field& M = mk[g * nk + ik];
                Field& Pa = pka[g * nk + ik];
                Field& Pb = pkb[g * nk + ik];
                for (std::size_t q = 0; q < cells; ++q) {
                    M[q] += dth * A_fn(u[q], ks[ik], a0[q]);
                    Pa[q] += th * H[ik].c1[q];
                    Pb[q] += th * H[ik].c2[q];
                }
            }
        }
    }

    struct Row {
        std::string id;
        double lhs;
        double phi_int;
        double mu;
        bool info;
        std::string detail;
    };
    std::vector<Row> rows;
    for (std::size_t p = 0; p < phi_set.size(); ++p) {
        const TestFunction& phi = phi_set[p];
        const std::size_t g = groups.group_of[p];
        const Field& S = groups.spatial[p];
        Field S1 = grid.make_field();
        Field S2 = grid.make_field();
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            for (std::size_t j = 0; j < grid.n2(); ++j) {
                S1(i, j) = phi.x1.deriv(grid.x1(i)) * phi.x2.value(grid.x2(j));
                S2(i, j) = phi.x1.value(grid.x1(i)) * phi.x2.deriv(grid.x2(j));
            }
        }
        const double phi_int = theta_int[g] * pair_sum(S, grid.make_field(vol));
        const double mu = theta_int[g] * vol * pair_sum(S, mu0);
        const double lhs9 = vol * (pair_sum(S, m9[g]) - pair_sum(S1, p9a[g]) - pair_sum(S2, p9b[g]));
        rows.push_back({"dirichlet.abs." + phi.id, lhs9, phi_int, 0.0, false, ""});
        for (std::size_t ik = 0; ik < nk; ++ik) {
            const std::size_t o = g * nk + ik;
            const double lhs = vol * (pair_sum(S, mk[o]) - pair_sum(S1, pka[o]) - pair_sum(S2, pkb[o]));
            char kid[32];
            std::snprintf(kid, sizeof kid, "k%02zu", ik);
            std::ostringstream det;
            det << "k=" << ks[ik];
            rows.push_back({std::string("dirichlet.level.") + kid + "." + phi.id, lhs, phi_int, mu, ik >= n_inside,
                            det.str()});
        }
    }

    double c_star = 0.0;
    for (const Row& r : rows) {
        if (!r.info && r.phi_int > 0.0) {
            c_star = std::max(c_star, -(r.lhs + r.mu) / r.phi_int);
        }
    }
    for (const Row& r : rows) {
        CheckEntry e;
        e.id = r.id;
        e.defect = r.lhs + c_star * r.phi_int + r.mu;
        e.tolerance = 1e-12 * (std::abs(r.lhs) + c_star * r.phi_int + r.mu) * opt.tol_scale;
        e.status = r.info ? Status::Info : (e.defect >= -e.tolerance ? Status::Pass : Status::Fail);
        std::ostringstream det;
        det << r.detail << (r.detail.empty() ? "" : " ") << "lhs=" << r.lhs << " int_phi=" << r.phi_int
            << " mu0=" << r.mu;
        e.detail = det.str();
        rep.add(e);
    }
    {
        CheckEntry e;
        e.id = "dirichlet.c_star";
        e.status = Status::Info;
        e.defect = c_star;
        e.detail = "smallest constant making every in-range inequality hold";
        rep.add(e);
    }

    // x''-profile of int |b(u) - b(a0)| phi dx' for phi = theta(t) psi1(x').
    if (!phi_set.empty()) {
        const TestFunction& phi = phi_set.front();
        const std::size_t n2 = grid.n2();
        double h1_norm = 0.0;
        double trace = 0.0;
        double theta_max = 0.0;
        for (std::size_t n = 0; n + 1 < ser.states.size(); ++n) {
            const Field& u = *ser.states[n];
            const double th = phi.t.value(ser.times[n]);
            const double dt = ser.times[n + 1] - ser.times[n];
            theta_max = std::max(theta_max, th);
            std::vector<double> g(n2, 0.0);
            for (std::size_t i = 0; i < grid.n1(); ++i) {
                const double w = phi.x1.value(grid.x1(i)) * grid.dx1() * th;
                for (std::size_t j = 0; j < n2; ++j) {
                    g[j] += std::abs(spec.b(u(i, j)) - spec.b(a0(i, j))) * w;
                }
            }
            double s = 0.0;
            for (std::size_t j = 0; j < n2; ++j) {
                s += g[j] * g[j];
                const double below = j == 0 ? 0.0 : g[j - 1];
                const double gap = j == 0 ? 0.5 * grid.dx2() : grid.dx2();
                s += std::pow((g[j] - below) / gap, 2);
            }
            s += std::pow(g[n2 - 1] / (0.5 * grid.dx2()), 2);
            h1_norm += dt * s * grid.dx2();
            trace = std::max({trace, g.front(), g.back()});
        }
        double psi_int = 0.0;
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            psi_int += phi.x1.value(grid.x1(i)) * grid.dx1();
        }
        const double lip_b = max_abs_derivative(spec.b, spec.u_min, spec.u_max);
        CheckEntry h1;
        h1.id = "dirichlet.h1";
        h1.status = std::isfinite(h1_norm) ? Status::Info : Status::Fail;
        h1.defect = std::sqrt(h1_norm);
        h1.detail = "discrete L2(H1) norm in x'' of int |b(u) - b(a0)| phi dx'";
        rep.add(h1);
        CheckEntry tr;
        tr.id = "dirichlet.trace";
        tr.defect = -trace;
        tr.tolerance = opt.trace_constant * lip_b * range / e2.length() * psi_int * theta_max * grid.dx2() *
                       opt.tol_scale;
        tr.status = tr.defect >= -tr.tolerance ? Status::Pass : Status::Fail;
        tr.detail = "value next to Gamma'' (first cell center)";
        rep.add(tr);
    }
    return rep;
}

namespace {

/// Bound on int |u(dt) - u0| / dt for one scheme step from u0: the summed
/// jumps of the numerical flux against the cell's own flux.
double data_lip_constant(const Field& u0, const RunArtifacts& run)
{
    const Grid grid(run.grid);
    const ProblemSpec& spec = run.spec;
    const FluxScheme flux(spec, grid, run.config.eps);
    const std::size_t n1 = grid.n1();
    const std::size_t n2 = grid.n2();
    double total = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const double u = u0(i, j);
            const double self1 = flux.x1(u, u);
            const double self2 = flux.x2(u, u);
            double left = 0.0;
            double right = 0.0;
            if (run.config.neumann == NeumannMode::Extrapolate) {
                left = i == 0 ? self1 : flux.x1(u0(i - 1, j), u);
                right = i + 1 == n1 ? self1 : flux.x1(u, u0(i + 1, j));
            } else {
                left = i == 0 ? 0.0 : flux.x1(u0(i - 1, j), u);
                right = i + 1 == n1 ? 0.0 : flux.x1(u, u0(i + 1, j));
            }
            const double below = flux.x2(j == 0 ? dirichlet_ghost(spec, grid, i, -1) : u0(i, j - 1), u);
            const double above = flux.x2(u, j + 1 == n2 ? dirichlet_ghost(spec, grid, i, +1) : u0(i, j + 1));
            total += (std::abs(left - self1) + std::abs(right - self1)) * grid.dx2() +
                     (std::abs(below - self2) + std::abs(above - self2)) * grid.dx1();
        }
    }
    return total;
}

}  // namespace

VerificationReport check_initial_condition(const RunArtifacts& run, const InitialOptions& opt)
{
    VerificationReport rep;
    const Grid grid(run.grid);
    const Series ser = series_of(run);
    const Field& u0 = run.snapshots.front().u;
    CheckEntry e;
    e.id = "initial";
    if (ser.states.size() < 3) {
        e.status = Status::Info;
        e.detail = "skipped: fewer than two early states";
        rep.add(e);
        return rep;
    }
    const double t0 = ser.times[1];
    std::vector<double> ts;
    std::vector<double> errs;
    std::size_t n = 1;
    for (double target = t0; target <= ser.times.back() * (1.0 + 1e-12) && ts.size() < 12; target *= 2.0) {
        while (n < ser.times.size() && ser.times[n] < target * (1.0 - 1e-9)) {
            ++n;
        }
        if (n == ser.times.size()) {
            break;
        }
        if (std::abs(ser.times[n] - target) <= 1e-9 * target) {
            ts.push_back(ser.times[n]);
            errs.push_back(l1_norm(*ser.states[n], u0, grid));
        }
    }
    if (ts.size() < 2) {
        e.status = Status::Info;
        e.detail = "skipped: no dyadic early times available";
        rep.add(e);
        return rep;
    }
    bool monotone = true;
    for (std::size_t m = 0; m + 1 < errs.size(); ++m) {
        if (errs[m] > errs[m + 1] * (1.0 + 1e-10)) {
            monotone = false;
        }
    }
    const double bound = opt.c_lip * ts[0] * data_lip_constant(u0, run) * opt.tol_scale;
    e.defect = bound - errs[0];
    e.tolerance = 0.0;
    e.status = monotone && errs[0] <= bound ? Status::Pass : Status::Fail;
    std::ostringstream det;
    det.precision(6);
    det << "first=" << errs[0] << " bound=" << bound << " extrapolated=" << 2.0 * errs[0] - errs[1]
        << " monotone=" << (monotone ? "yes" : "no") << " seq=";
    for (std::size_t m = 0; m < errs.size(); ++m) {
        det << (m ? "," : "") << errs[m];
    }
    e.detail = det.str();
    rep.add(e);
    return rep;
}

VerificationReport check_contraction(const RunArtifacts& run_u, const RunArtifacts& run_v, double rel_tol)
{
    if (!(run_u.grid == run_v.grid)) {
        throw Error("check_contraction: the two runs use different grids");
    }
    VerificationReport rep;
    CheckEntry e;
    e.id = "contraction";
    const Grid grid(run_u.grid);
    const ProblemSpec& a = run_u.spec;
    const ProblemSpec& b = run_v.spec;
    const bool same_problem = a.a0 == b.a0 && a.flux_f1 == b.flux_f1 && a.flux_f2 == b.flux_f2 &&
                              a.diff_b22 == b.diff_b22 && run_u.config.eps == run_v.config.eps &&
                              run_u.config.neumann == run_v.config.neumann;

    std::vector<double> gaps;
    std::vector<double> times;
    const bool both_full = !run_u.trajectory.empty() && run_u.trajectory_times == run_v.trajectory_times;
    if (both_full) {
        for (std::size_t n = 0; n < run_u.trajectory.size(); ++n) {
            times.push_back(run_u.trajectory_times[n]);
            gaps.push_back(l1_norm(run_u.trajectory[n], run_v.trajectory[n], grid));
        }
    } else {
        for (const auto& su : run_u.snapshots) {
            for (const auto& sv : run_v.snapshots) {
                if (std::abs(su.t - sv.t) <= 1e-12 * std::max(1.0, su.t)) {
                    times.push_back(su.t);
                    gaps.push_back(l1_norm(su.u, sv.u, grid));
                }
            }
        }
    }
    double worst = 0.0;  // largest relative increase
    std::size_t worst_at = 0;
    for (std::size_t n = 1; n < gaps.size(); ++n) {
        const double inc = gaps[n] - gaps[n - 1];
        const double rel = gaps[n - 1] > 0.0 ? inc / gaps[n - 1] : (inc > 0.0 ? inc : 0.0);
        if (rel > worst) {
            worst = rel;
            worst_at = n;
        }
    }
    e.defect = -worst;
    e.tolerance = rel_tol;
    std::ostringstream det;
    det.precision(6);
    det << "levels=" << gaps.size() << " first=" << (gaps.empty() ? 0.0 : gaps.front())
        << " last=" << (gaps.empty() ? 0.0 : gaps.back());
    if (worst > 0.0) {
        det << " worst increase at t=" << times[worst_at];
    }
    if (!same_problem) {
        e.status = Status::Info;
        det << "; runs differ in boundary data or equation, contraction not asserted";
    } else {
        e.status = worst <= rel_tol ? Status::Pass : Status::Fail;
    }
    e.detail = det.str();
    rep.add(e);
    return rep;
}

}  // namespace degenflow
