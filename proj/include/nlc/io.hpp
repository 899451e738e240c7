#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nlc/scheme.hpp"

namespace nlc {

namespace fs = std::filesystem;

/// Sidecar of one snapshot array: grid cell counts, spacing, sample layout
/// (center, xface or yface), component count and time.
struct SnapshotMeta {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    std::string layout = "center";
    int components = 1;
    double time = 0.0;
};

/// snap_<step:06d>_<name>
std::string snapshot_stem(long step, const std::string& name);

/// Writes <stem>.f64 (little-endian doubles, y-outer x-inner, components as
/// consecutive planes) and <stem>.json. Returns both paths.
std::vector<fs::path> write_snapshot_array(const fs::path& dir, long step, const std::string& name,
                                           std::span<const double> data, const SnapshotMeta& meta);
std::vector<double> read_snapshot_array(const fs::path& dir, long step, const std::string& name, SnapshotMeta& meta);

/// rho, ux, uy, p and d of a state.
std::vector<fs::path> write_state_snapshot(const fs::path& dir, long step, const FlowState& s);
FlowState read_state_snapshot(const fs::path& dir, long step);
bool has_state_snapshot(const fs::path& dir, long step);

const std::vector<std::string>& diagnostics_columns();
std::string diagnostics_header();
/// Values printed with the shortest round-trip representation.
std::string diagnostics_row(const DiagnosticsRecord& r);
std::vector<DiagnosticsRecord> read_diagnostics(const fs::path& csv);

std::string sha256_file(const fs::path& p);

struct ManifestEntry {
    std::string path;  ///< relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

/// manifest.json listing every file with checksums; `complete = false` marks a
/// truncated run and `note` says why.
void write_manifest(const fs::path& dir, const std::vector<fs::path>& files, bool complete, const std::string& note);

/// Writes text to dir/name and returns the path.
fs::path write_text(const fs::path& dir, const std::string& name, const std::string& text);

}  // namespace nlc
