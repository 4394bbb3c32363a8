#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "degenflow/io.hpp"

using namespace degenflow;

TEST(Io, FnvPublishedVectors)
{
    EXPECT_EQ(hash_hex(fnv1a("")), "cbf29ce484222325");
    EXPECT_EQ(hash_hex(fnv1a("a")), "af63dc4c8601ec8c");
    EXPECT_EQ(hash_hex(fnv1a("foobar")), "85944171f73967e8");
}

TEST(Io, SnapshotLayoutRowsAreXPrime)
{
    const Grid grid(GridSpec{2, 3, {0.0, 1.0}, {0.0, 1.0}});
    Snapshot s{0.5, grid.make_field()};
    s.u(0, 2) = 0.25;
    s.u(1, 0) = -1.0;
    EXPECT_EQ(format_snapshot(s, grid), "t 0.5 n1 2 n2 3\n0 0 0.25\n-1 0 0\n");
}

TEST(IoProperty, SnapshotRoundTripIsExact)
{
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> pick(-1.0, 1.0);
    const Grid grid(GridSpec{7, 5, {0.0, 1.0}, {0.0, 1.0}});
    for (int trial = 0; trial < 20; ++trial) {
        Snapshot s{std::ldexp(pick(rng), -trial), grid.make_field()};
        for (double& v : s.u.values()) {
            v = std::ldexp(pick(rng), static_cast<int>(pick(rng) * 40));
        }
        s.u[0] = std::numeric_limits<double>::denorm_min();
        const Snapshot back = parse_snapshot(format_snapshot(s, grid), grid);
        EXPECT_EQ(back.t, s.t);
        EXPECT_EQ(back.u, s.u);
    }
}

TEST(Io, SnapshotRejectsMismatches)
{
    const Grid grid(GridSpec{2, 2, {0.0, 1.0}, {0.0, 1.0}});
    EXPECT_THROW(parse_snapshot("t 0 n1 3 n2 2\n0 0\n0 0\n0 0\n", grid), Error);
    EXPECT_THROW(parse_snapshot("t 0 n1 2 n2 2\n0 0\n0\n", grid), Error);
    EXPECT_THROW(parse_snapshot("t 0 n1 2 n2 2\n0 0\n0 0 7\n", grid), Error);
    EXPECT_THROW(parse_snapshot("time 0 n1 2 n2 2\n0 0\n0 0\n", grid), Error);
    EXPECT_THROW(parse_snapshot("t 0 n1 2 n2 2\n0 x\n0 0\n", grid), Error);
}

TEST(Io, ReportRoundTrip)
{
    VerificationReport rep;
    rep.add({"entropy.cell.k01.bump", Status::Pass, 1.5e-17, 1e-10, "detail"});
    rep.add({"neumann.g1", Status::Fail, -0.25, 0.125, ""});
    rep.add({"dirichlet.c_star", Status::Info, 0.1, 0.0, ""});
    const std::string text = format_report(rep, "0123456789abcdef");
    EXPECT_EQ(text.substr(text.rfind("manifest")), "manifest 0123456789abcdef\n");
    const ParsedReport back = parse_report(text);
    EXPECT_EQ(back.manifest_hash, "0123456789abcdef");
    ASSERT_EQ(back.report.entries.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(back.report.entries[k].id, rep.entries[k].id);
        EXPECT_EQ(back.report.entries[k].status, rep.entries[k].status);
        EXPECT_EQ(back.report.entries[k].defect, rep.entries[k].defect);
        EXPECT_EQ(back.report.entries[k].tolerance, rep.entries[k].tolerance);
    }
    EXPECT_EQ(format_report_log(rep), "entropy.cell.k01.bump: detail\n");
    EXPECT_THROW(parse_report("a pass 0 0\n"), Error);
    EXPECT_THROW(parse_report("a maybe 0 0\nmanifest x\n"), Error);
}

TEST(Io, ManifestRoundTrip)
{
    Manifest m;
    m.scenario_text = "[grid]\nn1 = 8\n\n[model]\n# p = 1\n";
    m.scenario_hash = hash_hex(fnv1a(m.scenario_text));
    m.steps = 42;
    m.snapshots = {{"snap_000.txt", 0.0, "00"}, {"snap_001.txt", 0.1, "ff"}};
    const Manifest back = parse_manifest(format_manifest(m));
    EXPECT_EQ(back.scenario_text, m.scenario_text);
    EXPECT_EQ(back.scenario_hash, m.scenario_hash);
    EXPECT_EQ(back.steps, 42);
    ASSERT_EQ(back.snapshots.size(), 2u);
    EXPECT_EQ(back.snapshots[1].file, "snap_001.txt");
    EXPECT_EQ(back.snapshots[1].t, 0.1);
    EXPECT_THROW(parse_manifest("steps 3\n"), Error);
}
