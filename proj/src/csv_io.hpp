#pragma once

// Text formats:
//
//   snapshots:   "# n=<n> times=<t1,t2,...>" then n rows "x_j,u_1(x_j),...".
//   diagnostics: "t,dt,min_u,max_u,mass,h12,dissipation" then one row per
//                scalar record.
//
// Reals are written with 17 significant digits, so parse -> format
// reproduces the text byte for byte.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "solver.hpp"

namespace arcflow {

std::string format_real(double v);

std::string format_snapshot_csv(const std::vector<Snapshot>& snapshots);
std::vector<Snapshot> parse_snapshot_csv(std::string_view text);

std::string format_diagnostics_csv(const std::vector<ScalarRecord>& records);

void write_snapshot_csv(const Trajectory& traj, const std::filesystem::path& path);
std::vector<Snapshot> read_snapshot_csv(const std::filesystem::path& path);
void write_diagnostics_csv(const Trajectory& traj, const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace arcflow
