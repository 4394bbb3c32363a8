#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "degenflow/io.hpp"

namespace fs = std::filesystem;
using namespace degenflow;

namespace {

fs::path work_dir()
{
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("degenflow_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int cli(const std::string& args)
{
    const std::string cmd = std::string(DEGENFLOW_CLI) + " " + args + " > " + (work_dir() / "last.out").string() +
                            " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string last_output() { return read_file((work_dir() / "last.out").string()); }

std::string scenario(const std::string& name) { return std::string(DEGENFLOW_SCENARIOS) + "/" + name; }

std::string write_scenario(const std::string& name, const std::string& text)
{
    const fs::path p = work_dir() / name;
    write_file(p.string(), text);
    return p.string();
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(cli(""), 2);
    EXPECT_EQ(cli("frobnicate"), 2);
    EXPECT_EQ(cli("run"), 2);
    EXPECT_EQ(cli("run " + scenario("minimal.cfg") + " --tol-scale -1"), 2);
    EXPECT_EQ(cli("--help"), 0);
}

TEST(Cli, ConfigErrorsExitTwo)
{
    EXPECT_EQ(cli("audit /nonexistent/file.cfg"), 2);
    const std::string bad =
        write_scenario("bad.cfg", "[model]\nfamily = tadmor_tao\nell = 2\nn = 1\nu_min = -1\nu_max = 1\n");
    EXPECT_EQ(cli("audit " + bad), 2);
    EXPECT_NE(last_output().find("tadmor_tao requires n >= 2*ell"), std::string::npos) << last_output();
    EXPECT_EQ(cli("contract " + scenario("minimal.cfg") + " -o " + (work_dir() / "c").string()), 2);
}

TEST(Cli, RunThenVerifyPasses)
{
    const std::string small =
        write_scenario("small.cfg", "[grid]\nn1 = 16\nn2 = 16\n[data]\nu0 = bump\nu0_amp = 0.4\nu0_radius = 0.3\n"
                                    "[solver]\nt_end = 0.1\nsnapshots = 0.05\n");
    const fs::path out = work_dir() / "run";
    ASSERT_EQ(cli("run " + small + " -o " + out.string()), 0) << last_output();
    EXPECT_TRUE(fs::exists(out / "snap_000.txt"));
    EXPECT_TRUE(fs::exists(out / "snap_002.txt"));
    EXPECT_EQ(cli("verify " + (out / "run.manifest").string()), 0) << last_output();
    const std::string manifest = read_file((out / "run.manifest").string());
    const ParsedReport rep = parse_report(read_file((out / "verify.report").string()));
    EXPECT_EQ(rep.manifest_hash, hash_hex(fnv1a(manifest)));
    EXPECT_NE(rep.report.find("reproducibility"), nullptr);
    EXPECT_NE(rep.report.find("max_principle"), nullptr);
    EXPECT_TRUE(rep.report.all_pass());
}

TEST(Cli, SnapshotsAreBitIdenticalAcrossRuns)
{
    const std::string small = write_scenario("tiny.cfg", "[grid]\nn1 = 12\nn2 = 12\n[solver]\nt_end = 0.05\n");
    ASSERT_EQ(cli("run " + small + " -o " + (work_dir() / "a").string()), 0);
    ASSERT_EQ(cli("run " + small + " -o " + (work_dir() / "b").string()), 0);
    for (const char* f : {"snap_000.txt", "snap_001.txt", "run.manifest"}) {
        EXPECT_EQ(read_file((work_dir() / "a" / f).string()), read_file((work_dir() / "b" / f).string())) << f;
    }
}

TEST(Cli, TamperedSnapshotFailsVerification)
{
    const std::string small = write_scenario("tamper.cfg", "[grid]\nn1 = 12\nn2 = 12\n[solver]\nt_end = 0.05\n"
                                                           "[verify]\nchecks = max_principle\n");
    const fs::path out = work_dir() / "tamper";
    ASSERT_EQ(cli("run " + small + " -o " + out.string()), 0);
    const Grid grid(GridSpec{12, 12, {0.0, 1.0}, {0.0, 1.0}});
    Snapshot s = parse_snapshot(read_file((out / "snap_001.txt").string()), grid);
    s.u(3, 4) = 1.5;
    write_file((out / "snap_001.txt").string(), format_snapshot(s, grid));
    EXPECT_EQ(cli("verify " + (out / "run.manifest").string()), 1);
    const ParsedReport rep = parse_report(read_file((out / "verify.report").string()));
    EXPECT_EQ(rep.report.find("max_principle")->status, Status::Fail);
    EXPECT_EQ(rep.report.find("reproducibility")->status, Status::Fail);
}

TEST(Cli, AuditWritesModelChecksOnly)
{
    const fs::path out = work_dir() / "audit";
    EXPECT_EQ(cli("audit " + scenario("tadmor_tao.cfg") + " -o " + out.string() + " --seed 3"), 1);
    const ParsedReport rep = parse_report(read_file((out / "audit.report").string()));
    EXPECT_EQ(rep.report.find("audit.ellipticity")->status, Status::Pass);
    EXPECT_EQ(rep.report.find("audit.pinning")->status, Status::Info);
    EXPECT_EQ(rep.report.find("audit.nondegeneracy")->status, Status::Fail);
    EXPECT_EQ(rep.report.find("max_principle"), nullptr);
}
