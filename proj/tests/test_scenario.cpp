#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "degenflow/io.hpp"
#include "degenflow/scenario.hpp"

using namespace degenflow;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_scenario(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST(Scenario, MinimalScenarioRecordsDefaults)
{
    const Scenario s = parse_scenario("[model]\nfamily = pinned\n");
    EXPECT_EQ(s.grid.n1, 32);
    EXPECT_EQ(s.grid.n2, 32);
    const auto has = [&](const std::string& k) {
        return std::find(s.defaulted.begin(), s.defaulted.end(), k) != s.defaulted.end();
    };
    EXPECT_TRUE(has("grid.n1"));
    EXPECT_TRUE(has("solver.eps"));
    EXPECT_FALSE(has("model.family"));
    EXPECT_FALSE(has("data2.u0"));
    EXPECT_FALSE(s.u0_alt.has_value());
}

TEST(Scenario, TadmorTaoConstraintIsASemanticError)
{
    const std::string msg = error_of("[model]\nfamily = tadmor_tao\nell = 2\nn = 1\nu_min = -1\nu_max = 1\n"
                                     "[data]\nu0_base = 0\na0_c0 = 0\n");
    EXPECT_TRUE(contains(msg, "rejected by model")) << msg;
    EXPECT_TRUE(contains(msg, "tadmor_tao requires n >= 2*ell")) << msg;
}

TEST(Scenario, SyntaxErrorsCarryLineNumbers)
{
    EXPECT_TRUE(contains(error_of("[grid]\nn1 = 16\nn1 = 16\n"), "line 3"));
    EXPECT_TRUE(contains(error_of("[grid]\nn1 = 16\nn1 = 16\n"), "duplicate key"));
    EXPECT_TRUE(contains(error_of("[grid]\n\nbogus = 1\n"), "line 3: unknown key 'bogus'"));
    EXPECT_TRUE(contains(error_of("[nowhere]\n"), "line 1: unknown section"));
    EXPECT_TRUE(contains(error_of("n1 = 4\n"), "line 1: key outside of any section"));
    EXPECT_TRUE(contains(error_of("[grid]\nn1 16\n"), "line 2: expected 'key = value'"));
    EXPECT_TRUE(contains(error_of("[grid]\nn1 = 1.5\n"), "line 2"));
    EXPECT_TRUE(contains(error_of("[solver]\neps = fast\n"), "expected a number"));
    EXPECT_TRUE(contains(error_of("[grid]\n[grid]\n"), "duplicate section"));
    EXPECT_TRUE(contains(error_of("[verify]\nchecks = entropy, magic\n"), "unknown check 'magic'"));
}

TEST(Scenario, SemanticErrorsNameTheValidator)
{
    EXPECT_TRUE(contains(error_of("[grid]\nn1 = 1\n"), "rejected by grid"));
    EXPECT_TRUE(contains(error_of("[data]\nu0 = bump\nu0_amp = 0.9\n"), "rejected by data"));
    EXPECT_TRUE(contains(error_of("[solver]\ncfl = 2\n"), "rejected by solver"));
    EXPECT_TRUE(contains(error_of("[solver]\neps_list = 0.1, 0.2\n"), "rejected by solver"));
    EXPECT_TRUE(contains(error_of("[verify]\ntrace_depths = 3\n"), "rejected by verify"));
}

TEST(Scenario, CommentsAndWhitespaceAreIgnored)
{
    const Scenario s = parse_scenario("# header\n  [grid]  \n n1 =  16   # trailing\n; other comment\n");
    EXPECT_EQ(s.grid.n1, 16);
}

TEST(Scenario, SecondDatumBlock)
{
    const Scenario s = parse_scenario("[data2]\nu0 = bump\nu0_amp = 0.2\n");
    ASSERT_TRUE(s.u0_alt.has_value());
    EXPECT_EQ(s.u0_alt->kind, InitialData::Kind::Bump);
    EXPECT_DOUBLE_EQ(build_alt_problem(s).u0.amp, 0.2);
    EXPECT_THROW(build_alt_problem(parse_scenario("")), Error);
}

TEST(Scenario, EarlyLevelsAddDyadicSnapshots)
{
    const Scenario s = parse_scenario("[solver]\nearly_levels = 3\nsnapshots = 0.05\n");
    const ProblemSpec spec = build_problem(s);
    const SolverConfig c = build_config(s, spec);
    const double dt = stable_dt(spec, Grid(s.grid), c);
    ASSERT_EQ(c.snapshot_times.size(), 4u);
    EXPECT_DOUBLE_EQ(c.snapshot_times[0], dt);
    EXPECT_DOUBLE_EQ(c.snapshot_times[1], 2 * dt);
    EXPECT_DOUBLE_EQ(c.snapshot_times[2], 4 * dt);
    EXPECT_DOUBLE_EQ(c.snapshot_times[3], 0.05);
}

TEST(Scenario, LevelListOverridesCount)
{
    EXPECT_EQ(scenario_levels(parse_scenario("[verify]\nk_levels = 3\n")), (std::vector<double>{0.25, 0.5, 0.75}));
    EXPECT_EQ(scenario_levels(parse_scenario("[verify]\nk_list = 0.3, 0.6\n")), (std::vector<double>{0.3, 0.6}));
}

TEST(Scenario, ShippedScenariosRoundTrip)
{
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(DEGENFLOW_SCENARIOS)) {
        if (entry.path().extension() != ".cfg") {
            continue;
        }
        ++seen;
        const Scenario a = parse_scenario(read_file(entry.path().string()));
        const Scenario b = parse_scenario(serialize_scenario(a));
        EXPECT_EQ(a, b) << entry.path();
    }
    EXPECT_GE(seen, 5);
}

TEST(ScenarioProperty, RandomScenariosRoundTrip)
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto coin = [&] { return u01(rng) < 0.5; };
    for (int trial = 0; trial < 200; ++trial) {
        std::ostringstream t;
        t.precision(17);
        t << "[grid]\n";
        if (coin()) {
            t << "n1 = " << 4 + static_cast<int>(u01(rng) * 60) << "\n";
        }
        if (coin()) {
            t << "x2_max = " << 1.0 + u01(rng) << "\n";
        }
        t << "[model]\n";
        if (coin()) {
            t << "family = pinned\np = " << 1 + static_cast<int>(u01(rng) * 3) << "\n";
        }
        if (coin()) {
            t << "n = " << 2 + static_cast<int>(u01(rng) * 3) << "\n";
        }
        if (coin()) {
            t << "f1_scale = " << u01(rng) << "\n";
        }
        t << "[data]\n";
        if (coin()) {
            t << "u0 = bump\nu0_amp = " << 0.4 * u01(rng) << "\nu0_c1 = " << u01(rng) << "\n";
        }
        if (coin()) {
            t << "a0_c0 = " << 0.2 + 0.6 * u01(rng) << "\n";
        }
        if (coin()) {
            t << "[data2]\nu0 = step_x1\nu0_left = " << u01(rng) << "\nu0_right = " << u01(rng) << "\n";
        }
        t << "[solver]\n";
        if (coin()) {
            t << "eps = " << 1e-3 * u01(rng) << "\n";
        }
        if (coin()) {
            t << "eps_list = 0.1, " << 0.05 * u01(rng) + 0.001 << "\n";
        }
        if (coin()) {
            t << "snapshots = " << 0.05 * u01(rng) + 1e-3 << ", 0.07\nkeep_trajectory = true\n";
        }
        if (coin()) {
            t << "neumann = extrapolate\n";
        }
        t << "[verify]\n";
        if (coin()) {
            t << "checks = entropy, kinetic\nxi_list = " << u01(rng) << "\n";
        }
        if (coin()) {
            t << "nondeg_threshold = " << 1e-3 * u01(rng) + 1e-9 << "\n";
        }
        const Scenario a = parse_scenario(t.str());
        const std::string text = serialize_scenario(a);
        const Scenario b = parse_scenario(text);
        ASSERT_EQ(a, b) << t.str() << "\n---\n" << text;
        EXPECT_EQ(serialize_scenario(b), text);
    }
}
