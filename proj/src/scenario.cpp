#include "degenflow/scenario.hpp"

#include "degenflow/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace degenflow {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s)
{
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw Error("expected a number, got '" + s + "'");
    }
    return v;
}

int parse_int(const std::string& s)
{
    int v = 0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw Error("expected an integer, got '" + s + "'");
    }
    return v;
}

bool parse_bool(const std::string& s)
{
    if (s == "true" || s == "yes" || s == "1") {
        return true;
    }
    if (s == "false" || s == "no" || s == "0") {
        return false;
    }
    throw Error("expected true or false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& s)
{
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        out.push_back(parse_double(item));
    }
    return out;
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) {
        out += (k ? ", " : "") + items[k];
    }
    return out;
}

std::string join(const std::vector<double>& items)
{
    std::vector<std::string> s;
    for (double v : items) {
        s.push_back(format_double(v));
    }
    return join(s);
}

const std::map<std::string, InitialData::Kind>& u0_kinds()
{
    static const std::map<std::string, InitialData::Kind> m{{"constant", InitialData::Kind::Constant},
                                                             {"bump", InitialData::Kind::Bump},
                                                             {"bump_x2", InitialData::Kind::BumpX2},
                                                             {"step_x1", InitialData::Kind::StepX1}};
    return m;
}

std::string u0_kind_name(InitialData::Kind k)
{
    for (const auto& [name, kind] : u0_kinds()) {
        if (kind == k) {
            return name;
        }
    }
    return "constant";
}

struct Key {
    std::string section;
    std::string name;
    std::function<void(Scenario&, const std::string&)> set;
    std::function<std::string(const Scenario&)> get;
};

#define DF_DOUBLE(sec, key, field)                                                                   \
    Key{sec, key, [](Scenario& s, const std::string& v) { s.field = parse_double(v); },             \
        [](const Scenario& s) { return format_double(s.field); }}
#define DF_INT(sec, key, field)                                                                      \
    Key{sec, key, [](Scenario& s, const std::string& v) { s.field = parse_int(v); },                \
        [](const Scenario& s) { return std::to_string(s.field); }}
#define DF_LIST(sec, key, field)                                                                     \
    Key{sec, key, [](Scenario& s, const std::string& v) { s.field = parse_doubles(v); },            \
        [](const Scenario& s) { return join(s.field); }}

std::vector<Key> initial_keys(const std::string& sec, bool alt)
{
    auto ref = [alt](Scenario& s) -> InitialData& {
        if (!alt) {
            return s.u0;
        }
        if (!s.u0_alt) {
            s.u0_alt = InitialData{};
        }
        return *s.u0_alt;
    };
    auto cref = [alt](const Scenario& s) -> const InitialData& {
        static const InitialData none{};
        return alt ? (s.u0_alt ? *s.u0_alt : none) : s.u0;
    };
    std::vector<Key> keys;
    keys.push_back({sec, "u0",
                    [ref](Scenario& s, const std::string& v) {
                        const auto it = u0_kinds().find(v);
                        if (it == u0_kinds().end()) {
                            throw Error("unknown u0 kind '" + v + "' (constant, bump, bump_x2, step_x1)");
                        }
                        ref(s).kind = it->second;
                    },
                    [cref](const Scenario& s) { return u0_kind_name(cref(s).kind); }});
    const std::pair<const char*, double InitialData::*> fields[] = {
        {"u0_base", &InitialData::base},   {"u0_amp", &InitialData::amp},   {"u0_c1", &InitialData::c1},
        {"u0_c2", &InitialData::c2},       {"u0_radius", &InitialData::radius},
        {"u0_split", &InitialData::split}, {"u0_left", &InitialData::left}, {"u0_right", &InitialData::right}};
    for (const auto& [name, member] : fields) {
        keys.push_back({sec, name, [ref, member](Scenario& s, const std::string& v) { ref(s).*member = parse_double(v); },
                        [cref, member](const Scenario& s) { return format_double(cref(s).*member); }});
    }
    return keys;
}

const std::vector<Key>& key_table()
{
    static const std::vector<Key> table = [] {
        std::vector<Key> t{
            DF_INT("grid", "n1", grid.n1),
            DF_INT("grid", "n2", grid.n2),
            DF_DOUBLE("grid", "x1_min", grid.extent1.lo),
            DF_DOUBLE("grid", "x1_max", grid.extent1.hi),
            DF_DOUBLE("grid", "x2_min", grid.extent2.lo),
            DF_DOUBLE("grid", "x2_max", grid.extent2.hi),
            Key{"model", "family",
                [](Scenario& s, const std::string& v) {
                    if (v == "pinned") {
                        s.family.kind = ModelFamily::Kind::Pinned;
                    } else if (v == "tadmor_tao") {
                        s.family.kind = ModelFamily::Kind::TadmorTao;
                    } else {
                        throw Error("unknown family '" + v + "' (pinned, tadmor_tao)");
                    }
                },
                [](const Scenario& s) {
                    return std::string(s.family.kind == ModelFamily::Kind::Pinned ? "pinned" : "tadmor_tao");
                }},
            DF_INT("model", "ell", family.ell),
            DF_INT("model", "n", family.n),
            DF_INT("model", "p", family.p),
            DF_INT("model", "q", family.q),
            DF_DOUBLE("model", "f2", family.f2),
            DF_DOUBLE("model", "f1_scale", family.f1_scale),
            DF_DOUBLE("model", "lambda", lambda_cap),
            DF_DOUBLE("model", "u_min", u_min),
            DF_DOUBLE("model", "u_max", u_max),
        };
        for (auto& k : initial_keys("data", false)) {
            t.push_back(std::move(k));
        }
        t.push_back(DF_DOUBLE("data", "a0_c0", a0.c0));
        t.push_back(DF_DOUBLE("data", "a0_c1", a0.c1));
        t.push_back(DF_DOUBLE("data", "a0_c11", a0.c11));
        t.push_back(DF_DOUBLE("data", "a0_c2", a0.c2));
        for (auto& k : initial_keys("data2", true)) {
            t.push_back(std::move(k));
        }
        t.push_back(DF_DOUBLE("solver", "eps", eps));
        t.push_back(DF_LIST("solver", "eps_list", eps_list));
        t.push_back(DF_DOUBLE("solver", "cfl", cfl));
        t.push_back(DF_DOUBLE("solver", "t_end", t_end));
        t.push_back(DF_LIST("solver", "snapshots", snapshots));
        t.push_back(DF_INT("solver", "early_levels", early_levels));
        t.push_back(Key{"solver", "keep_trajectory",
                        [](Scenario& s, const std::string& v) { s.keep_trajectory = parse_bool(v); },
                        [](const Scenario& s) { return std::string(s.keep_trajectory ? "true" : "false"); }});
        t.push_back(Key{"solver", "neumann",
                        [](Scenario& s, const std::string& v) {
                            if (v == "zero_flux") {
                                s.neumann = NeumannMode::ZeroFlux;
                            } else if (v == "extrapolate") {
                                s.neumann = NeumannMode::Extrapolate;
                            } else {
                                throw Error("unknown neumann mode '" + v + "' (zero_flux, extrapolate)");
                            }
                        },
                        [](const Scenario& s) {
                            return std::string(s.neumann == NeumannMode::ZeroFlux ? "zero_flux" : "extrapolate");
                        }});
        t.push_back(Key{"verify", "checks",
                        [](Scenario& s, const std::string& v) {
                            s.verify.checks = split_list(v);
                            for (const auto& c : s.verify.checks) {
                                if (std::find(known_checks().begin(), known_checks().end(), c) ==
                                    known_checks().end()) {
                                    throw Error("unknown check '" + c + "'");
                                }
                            }
                        },
                        [](const Scenario& s) { return join(s.verify.checks); }});
        t.push_back(DF_INT("verify", "k_levels", verify.k_levels));
        t.push_back(DF_LIST("verify", "k_list", verify.k_list));
        t.push_back(DF_LIST("verify", "xi_list", verify.xi_list));
        t.push_back(DF_LIST("verify", "trace_depths", verify.trace_depths));
        t.push_back(DF_DOUBLE("verify", "nondeg_threshold", verify.nondeg_threshold));
        t.push_back(DF_DOUBLE("verify", "nondeg_max_fraction", verify.nondeg_max_fraction));
        t.push_back(DF_INT("verify", "nondeg_directions", verify.nondeg_directions));
        t.push_back(DF_INT("verify", "nondeg_samples", verify.nondeg_samples));
        t.push_back(DF_DOUBLE("verify", "energy_bound", verify.energy_bound));
        return t;
    }();
    return table;
}

#undef DF_DOUBLE
#undef DF_INT
#undef DF_LIST

const std::vector<std::string>& section_order()
{
    static const std::vector<std::string> s{"grid", "model", "data", "data2", "solver", "verify"};
    return s;
}

// Semantic validation; every failure names the validator.
void validate(const Scenario& s)
{
    auto wrap = [](const char* validator, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            throw Error(std::string("scenario rejected by ") + validator + ": " + e.what());
        }
    };
    wrap("grid", [&] { Grid g(s.grid); });
    wrap("model", [&] { build_problem(s); });
    wrap("data", [&] {
        validate_data(build_problem(s), s.grid);
        if (s.u0_alt) {
            validate_data(build_alt_problem(s), s.grid);
        }
    });
    wrap("solver", [&] {
        if (!(s.t_end > 0.0)) {
            throw Error("t_end must be > 0");
        }
        if (s.early_levels < 0 || s.early_levels > 30) {
            throw Error("early_levels must lie in [0, 30]");
        }
        for (double t : s.snapshots) {
            if (!(t > 0.0 && t <= s.t_end)) {
                throw Error("snapshot times must lie in (0, t_end]");
            }
        }
        for (std::size_t k = 0; k < s.eps_list.size(); ++k) {
            if (!(s.eps_list[k] > 0.0) || (k > 0 && !(s.eps_list[k] < s.eps_list[k - 1]))) {
                throw Error("eps_list must be positive and strictly decreasing");
            }
        }
        const ProblemSpec spec = build_problem(s);
        stable_dt(spec, Grid(s.grid), build_config(s, spec));
    });
    wrap("verify", [&] {
        if (s.verify.k_levels < 1) {
            throw Error("k_levels must be >= 1");
        }
        if (s.verify.trace_depths.size() < 2) {
            throw Error("trace_depths needs at least two entries");
        }
        if (!(s.verify.nondeg_threshold > 0.0)) {
            throw Error("nondeg_threshold must be > 0");
        }
        if (s.verify.nondeg_directions < 1 || s.verify.nondeg_samples < 2) {
            throw Error("nondeg_directions >= 1 and nondeg_samples >= 2 required");
        }
    });
}

}  // namespace

const std::vector<std::string>& known_checks()
{
    static const std::vector<std::string> c{"max_principle", "entropy",    "neumann",      "dirichlet",
                                            "initial",       "kinetic",    "time_trace",   "trace_profile"};
    return c;
}

Scenario parse_scenario(const std::string& text)
{
    Scenario s;
    std::set<std::string> seen;
    std::set<std::string> sections_seen;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    auto fail = [&](const std::string& msg) {
        throw Error("scenario line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                fail("unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (std::find(section_order().begin(), section_order().end(), section) == section_order().end()) {
                fail("unknown section [" + section + "]");
            }
            if (!sections_seen.insert(section).second) {
                fail("duplicate section [" + section + "]");
            }
            if (section == "data2" && !s.u0_alt) {
                s.u0_alt = InitialData{};
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail("expected 'key = value'");
        }
        if (section.empty()) {
            fail("key outside of any section");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = std::find_if(key_table().begin(), key_table().end(),
                                     [&](const Key& k) { return k.section == section && k.name == key; });
        if (it == key_table().end()) {
            fail("unknown key '" + key + "' in [" + section + "]");
        }
        if (!seen.insert(section + "." + key).second) {
            fail("duplicate key '" + key + "' in [" + section + "]");
        }
        try {
            it->set(s, value);
        } catch (const Error& e) {
            fail(std::string(key) + ": " + e.what());
        }
    }
    for (const Key& k : key_table()) {
        if (k.section == "data2" && !s.u0_alt) {
            continue;
        }
        const std::string id = k.section + "." + k.name;
        if (!seen.count(id)) {
            s.defaulted.push_back(id);
        }
    }
    validate(s);
    return s;
}

std::string serialize_scenario(const Scenario& s)
{
    std::ostringstream out;
    for (const std::string& sec : section_order()) {
        if (sec == "data2" && !s.u0_alt) {
            continue;
        }
        out << "[" << sec << "]\n";
        for (const Key& k : key_table()) {
            if (k.section != sec) {
                continue;
            }
            const std::string id = sec + "." + k.name;
            const bool is_default = std::find(s.defaulted.begin(), s.defaulted.end(), id) != s.defaulted.end();
            out << (is_default ? "# " : "") << k.name << " = " << k.get(s) << "\n";
        }
        out << "\n";
    }
    return out.str();
}

ProblemSpec build_problem(const Scenario& s)
{
    ProblemSpec spec = make_problem(s.family, s.u_min, s.u_max, s.lambda_cap);
    spec.u0 = s.u0;
    spec.a0 = s.a0;
    return spec;
}

ProblemSpec build_alt_problem(const Scenario& s)
{
    if (!s.u0_alt) {
        throw Error("scenario has no [data2] block");
    }
    ProblemSpec spec = build_problem(s);
    spec.u0 = *s.u0_alt;
    return spec;
}

SolverConfig build_config(const Scenario& s, const ProblemSpec& spec)
{
    SolverConfig c;
    c.eps = s.eps;
    c.cfl = s.cfl;
    c.t_end = s.t_end;
    c.snapshot_times = s.snapshots;
    c.keep_trajectory = s.keep_trajectory;
    c.neumann = s.neumann;
    if (s.early_levels > 0) {
        const double dt = stable_dt(spec, Grid(s.grid), c);
        for (int m = 0; m < s.early_levels; ++m) {
            const double t = dt * static_cast<double>(1L << m);
            if (t < s.t_end) {
                c.snapshot_times.push_back(t);
            }
        }
        std::sort(c.snapshot_times.begin(), c.snapshot_times.end());
    }
    return c;
}

std::vector<double> scenario_levels(const Scenario& s)
{
    if (!s.verify.k_list.empty()) {
        return s.verify.k_list;
    }
    ProblemSpec spec;
    spec.u_min = s.u_min;
    spec.u_max = s.u_max;
    return spread_levels(spec, s.verify.k_levels);
}

}  // namespace degenflow
