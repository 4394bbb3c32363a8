#include "degenflow/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace degenflow {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& s, const std::string& what)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw Error("malformed " + what + ": '" + s + "'");
    }
    return v;
}

Status status_from(const std::string& s)
{
    if (s == "pass") {
        return Status::Pass;
    }
    if (s == "fail") {
        return Status::Fail;
    }
    if (s == "info") {
        return Status::Info;
    }
    throw Error("malformed report status '" + s + "'");
}

constexpr const char* kScenarioMarker = "scenario_begin";

}  // namespace

std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_snapshot(const Snapshot& snap, const Grid& grid)
{
    std::string out = "t " + fmt(snap.t) + " n1 " + std::to_string(grid.n1()) + " n2 " +
                      std::to_string(grid.n2()) + "\n";
    for (std::size_t i = 0; i < grid.n1(); ++i) {
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            out += (j ? " " : "") + fmt(snap.u(i, j));
        }
        out += "\n";
    }
    return out;
}

Snapshot parse_snapshot(const std::string& text, const Grid& grid)
{
    std::istringstream in(text);
    std::string tag_t, tag_1, tag_2, t_str;
    std::size_t n1 = 0, n2 = 0;
    if (!(in >> tag_t >> t_str >> tag_1 >> n1 >> tag_2 >> n2) || tag_t != "t" || tag_1 != "n1" || tag_2 != "n2") {
        throw Error("malformed snapshot header");
    }
    if (n1 != grid.n1() || n2 != grid.n2()) {
        throw Error("snapshot is " + std::to_string(n1) + "x" + std::to_string(n2) + ", grid is " +
                    std::to_string(grid.n1()) + "x" + std::to_string(grid.n2()));
    }
    Snapshot snap{to_double(t_str, "snapshot time"), Field(n1, n2)};
    std::string word;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            if (!(in >> word)) {
                throw Error("snapshot truncated");
            }
            snap.u(i, j) = to_double(word, "snapshot value");
        }
    }
    if (in >> word) {
        throw Error("trailing data in snapshot");
    }
    return snap;
}

std::string format_manifest(const Manifest& m)
{
    std::string out = "manifest 1\n";
    out += "scenario_hash " + m.scenario_hash + "\n";
    out += "steps " + std::to_string(m.steps) + "\n";
    for (const auto& e : m.snapshots) {
        out += "snapshot " + e.file + " " + fmt(e.t) + " " + e.hash + "\n";
    }
    out += std::string(kScenarioMarker) + "\n" + m.scenario_text;
    return out;
}

Manifest parse_manifest(const std::string& text)
{
    Manifest m;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line == kScenarioMarker) {
            std::ostringstream rest;
            rest << in.rdbuf();
            m.scenario_text = rest.str();
            if (!header) {
                throw Error("manifest has no header");
            }
            return m;
        }
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "manifest") {
            header = true;
        } else if (tag == "scenario_hash") {
            ls >> m.scenario_hash;
        } else if (tag == "steps") {
            ls >> m.steps;
        } else if (tag == "snapshot") {
            ManifestEntry e;
            std::string t;
            if (!(ls >> e.file >> t >> e.hash)) {
                throw Error("malformed manifest snapshot line");
            }
            e.t = to_double(t, "manifest time");
            m.snapshots.push_back(e);
        } else if (!tag.empty()) {
            throw Error("unknown manifest line '" + tag + "'");
        }
    }
    throw Error("manifest has no scenario block");
}

std::string format_report(const VerificationReport& report, const std::string& manifest_hash)
{
    std::string out;
    for (const auto& e : report.entries) {
        out += e.id + " " + to_string(e.status) + " " + fmt(e.defect) + " " + fmt(e.tolerance) + "\n";
    }
    out += "manifest " + manifest_hash + "\n";
    return out;
}

std::string format_report_log(const VerificationReport& report)
{
    std::string out;
    for (const auto& e : report.entries) {
        if (!e.detail.empty()) {
            out += e.id + ": " + e.detail + "\n";
        }
    }
    return out;
}

ParsedReport parse_report(const std::string& text)
{
    ParsedReport r;
    std::istringstream in(text);
    std::string line;
    bool closed = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (closed) {
            throw Error("report has lines after the manifest line");
        }
        std::istringstream ls(line);
        std::string a, b, c, d;
        ls >> a >> b;
        if (a == "manifest") {
            r.manifest_hash = b;
            closed = true;
            continue;
        }
        if (!(ls >> c >> d)) {
            throw Error("malformed report line '" + line + "'");
        }
        r.report.entries.push_back(
            {a, status_from(b), to_double(c, "report defect"), to_double(d, "report tolerance"), ""});
    }
    if (!closed) {
        throw Error("report has no manifest line");
    }
    return r;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read " + path);
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error("cannot write " + path);
    }
}

}  // namespace degenflow
