// degenflow: run, verify and audit scenarios of the anisotropic
// degenerate convection-diffusion solver.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "degenflow/io.hpp"
#include "degenflow/pipeline.hpp"

namespace fs = std::filesystem;
using namespace degenflow;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Common {
    std::string out_dir = ".";
    double tol_scale = 1.0;
};

fs::path prepare_dir(const std::string& dir)
{
    fs::create_directories(dir);
    return fs::path(dir);
}

std::string snapshot_name(std::size_t k)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%03zu.txt", k);
    return buf;
}

int emit_report(VerificationReport rep, const fs::path& dir, const std::string& stem, const std::string& source_hash)
{
    rep.finalize();
    write_file((dir / (stem + ".report")).string(), format_report(rep, source_hash));
    write_file((dir / (stem + ".log")).string(), format_report_log(rep));
    for (const auto& e : rep.entries) {
        if (e.status == Status::Fail) {
            std::cout << "FAIL " << e.id << " defect " << e.defect << " tolerance " << e.tolerance
                      << (e.detail.empty() ? "" : "  " + e.detail) << "\n";
        }
    }
    std::cout << stem << ": " << rep.count(Status::Pass) << " pass, " << rep.count(Status::Fail) << " fail, "
              << rep.count(Status::Info) << " info -> " << (dir / (stem + ".report")).string() << "\n";
    return rep.all_pass() ? kPass : kFail;
}

int cmd_run(const std::string& scenario_path, const Common& c)
{
    const std::string text = read_file(scenario_path);
    const Scenario s = parse_scenario(text);
    const RunArtifacts run = run_scenario(s, false);
    const Grid grid(s.grid);
    const fs::path dir = prepare_dir(c.out_dir);
    Manifest m;
    m.scenario_text = serialize_scenario(s);
    m.scenario_hash = hash_hex(fnv1a(m.scenario_text));
    m.steps = static_cast<int>(run.dt_history.size());
    for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
        const std::string body = format_snapshot(run.snapshots[k], grid);
        const std::string name = snapshot_name(k);
        write_file((dir / name).string(), body);
        m.snapshots.push_back({name, run.snapshots[k].t, hash_hex(fnv1a(body))});
    }
    write_file((dir / "run.manifest").string(), format_manifest(m));
    std::cout << "run: " << m.steps << " steps, " << m.snapshots.size() << " snapshots -> "
              << (dir / "run.manifest").string() << "\n";
    return kPass;
}

int cmd_verify(const std::string& manifest_path, const Common& c, bool out_given)
{
    const std::string manifest_text = read_file(manifest_path);
    const Manifest m = parse_manifest(manifest_text);
    const Scenario s = parse_scenario(m.scenario_text);
    const fs::path run_dir = fs::path(manifest_path).parent_path();
    const Grid grid(s.grid);

    RunArtifacts run = run_scenario(s, true);
    VerificationReport rep;
    CheckEntry repro;
    repro.id = "reproducibility";
    int mismatched = 0;
    std::string detail;
    if (run.snapshots.size() != m.snapshots.size()) {
        mismatched = 1;
        detail = "snapshot count differs from the manifest";
    }
    std::vector<Snapshot> loaded;
    for (std::size_t k = 0; k < m.snapshots.size(); ++k) {
        const std::string body = read_file((run_dir / m.snapshots[k].file).string());
        loaded.push_back(parse_snapshot(body, grid));
        const bool stored_ok = hash_hex(fnv1a(body)) == m.snapshots[k].hash;
        const bool rerun_ok = k < run.snapshots.size() && format_snapshot(run.snapshots[k], grid) == body;
        if (!stored_ok || !rerun_ok) {
            ++mismatched;
            detail += (detail.empty() ? "" : "; ") + m.snapshots[k].file +
                      (stored_ok ? " differs from the rerun" : " does not match its manifest hash");
        }
    }
    repro.defect = -static_cast<double>(mismatched);
    repro.status = mismatched == 0 ? Status::Pass : Status::Fail;
    repro.detail = detail;
    rep.add(repro);

    // The stored snapshots are what the maximum principle is judged on.
    run.snapshots = loaded;
    rep.merge(verify_run(s, run, c.tol_scale));
    const fs::path dir = prepare_dir(out_given ? c.out_dir : (run_dir.empty() ? "." : run_dir.string()));
    return emit_report(rep, dir, "verify", hash_hex(fnv1a(manifest_text)));
}

int cmd_sweep(const std::string& scenario_path, const Common& c)
{
    const std::string text = read_file(scenario_path);
    const Scenario s = parse_scenario(text);
    const SweepResult r = sweep_eps(s);
    const fs::path dir = prepare_dir(c.out_dir);
    std::string table = "# eps pairwise_l1 eps_grad_sq grad_b_sq\n";
    for (std::size_t k = 0; k < r.table.eps.size(); ++k) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.17g ", r.table.eps[k]);
        table += buf;
        // The last eps has no finer neighbour.
        if (k < r.table.pairwise_l1.size()) {
            std::snprintf(buf, sizeof buf, "%.17g", r.table.pairwise_l1[k]);
            table += buf;
        } else {
            table += "-";
        }
        std::snprintf(buf, sizeof buf, " %.17g %.17g\n", r.table.eps_grad_sq[k], r.table.grad_b_sq[k]);
        table += buf;
    }
    write_file((dir / "sweep.txt").string(), table);
    return emit_report(r.report, dir, "sweep", hash_hex(fnv1a(text)));
}

int cmd_trace(const std::string& scenario_path, const Common& c)
{
    const std::string text = read_file(scenario_path);
    const Scenario s = parse_scenario(text);
    const RunArtifacts run = run_scenario(s, true);
    const TraceResult tr = trace_scenario(s, run);
    const fs::path dir = prepare_dir(c.out_dir);
    std::string u_tau = "# t then u_tau samples (left wall, then right wall)\n";
    for (std::size_t n = 0; n < tr.profile.u_tau.size(); ++n) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", tr.profile.times[n]);
        u_tau += buf;
        for (double v : tr.profile.u_tau[n]) {
            std::snprintf(buf, sizeof buf, " %.17g", v);
            u_tau += buf;
        }
        u_tau += "\n";
    }
    write_file((dir / "u_tau.txt").string(), u_tau);
    VerificationReport rep = tr.report;
    rep.merge(gauss_green_battery(s.grid, c.tol_scale));
    return emit_report(rep, dir, "trace", hash_hex(fnv1a(text)));
}

int cmd_contract(const std::string& scenario_path, const Common& c)
{
    const std::string text = read_file(scenario_path);
    const Scenario s = parse_scenario(text);
    if (!s.u0_alt) {
        throw Error("contract needs a [data2] block with the second initial datum");
    }
    return emit_report(contract_scenario(s), prepare_dir(c.out_dir), "contract", hash_hex(fnv1a(text)));
}

int cmd_audit(const std::string& scenario_path, const Common& c, std::optional<std::uint64_t> seed)
{
    const std::string text = read_file(scenario_path);
    const Scenario s = parse_scenario(text);
    return emit_report(audit_scenario(s, seed), prepare_dir(c.out_dir), "audit", hash_hex(fnv1a(text)));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Solver and verifier for anisotropic degenerate convection-diffusion problems"};
    app.require_subcommand(1);
    Common common;
    std::string input;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub, const char* input_help) {
        sub->add_option("input", input, input_help)->required();
        sub->add_option("-o,--output", common.out_dir, "Output directory");
        sub->add_option("--tol-scale", common.tol_scale, "Global tolerance multiplier")
            ->check(CLI::PositiveNumber);
    };
    auto* run = app.add_subcommand("run", "Solve a scenario and write snapshots plus run.manifest");
    add_common(run, "Scenario file");
    auto* sweep = app.add_subcommand("sweep-eps", "Viscosity continuation over eps_list");
    add_common(sweep, "Scenario file");
    auto* verify = app.add_subcommand("verify", "Re-run a manifest and check the stored snapshots");
    add_common(verify, "run.manifest");
    auto* trace = app.add_subcommand("trace", "Boundary trace diagnostics and the Gauss-Green battery");
    add_common(trace, "Scenario file");
    auto* contract = app.add_subcommand("contract", "L1 contraction between the [data] and [data2] runs");
    add_common(contract, "Scenario file");
    auto* audit = app.add_subcommand("audit", "Model validators only, no time stepping");
    add_common(audit, "Scenario file");
    auto* seed_opt = audit->add_option("--seed", seed, "Adds random directions to the non-degeneracy scan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (run->parsed()) {
            return cmd_run(input, common);
        }
        if (sweep->parsed()) {
            return cmd_sweep(input, common);
        }
        if (verify->parsed()) {
            return cmd_verify(input, common, verify->count("-o") > 0);
        }
        if (trace->parsed()) {
            return cmd_trace(input, common);
        }
        if (contract->parsed()) {
            return cmd_contract(input, common);
        }
        if (audit->parsed()) {
            return cmd_audit(input, common, seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
        }
    } catch (const std::exception& e) {
        std::cerr << "degenflow: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
