#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "degenflow/grid.hpp"
#include "degenflow/solver.hpp"
#include "degenflow/verify.hpp"

namespace degenflow {

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

/// Snapshot text: header "t <time> n1 <n1> n2 <n2>", then one row per x'
/// index with n2 values each, printed with %.17g so a reload is exact.
std::string format_snapshot(const Snapshot& snap, const Grid& grid);
Snapshot parse_snapshot(const std::string& text, const Grid& grid);

struct ManifestEntry {
    std::string file;
    double t = 0.0;
    std::string hash;
};

struct Manifest {
    std::string scenario_text;
    std::string scenario_hash;
    std::vector<ManifestEntry> snapshots;
    int steps = 0;
};

std::string format_manifest(const Manifest& m);
Manifest parse_manifest(const std::string& text);

/// Report text: one "id status defect tolerance" line per entry and a
/// trailing "manifest <hash>" line. Details go to a separate log.
std::string format_report(const VerificationReport& report, const std::string& manifest_hash);
std::string format_report_log(const VerificationReport& report);

struct ParsedReport {
    VerificationReport report;
    std::string manifest_hash;
};

ParsedReport parse_report(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace degenflow
