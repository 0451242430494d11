#include "csv_io.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "error.hpp"

namespace arcflow {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s = s.substr(pos + 1);
  }
  return out;
}

double parse_real(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorCode::Format, "malformed number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_snapshot_csv(const std::vector<Snapshot>& snapshots) {
  if (snapshots.empty()) fail(ErrorCode::InvalidArgument, "no snapshots to write");
  const PeriodicGrid& grid = snapshots.front().u.grid();
  std::string out = "# n=" + std::to_string(grid.size()) + " times=";
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    require_same_grid(grid, snapshots[i].u.grid());
    out += (i ? "," : "") + format_real(snapshots[i].t);
  }
  out += "\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out += format_real(grid.point(j));
    for (const auto& s : snapshots) out += "," + format_real(s.u[j]);
    out += "\n";
  }
  return out;
}

std::vector<Snapshot> parse_snapshot_csv(std::string_view text) {
  const auto nl = text.find('\n');
  if (nl == std::string_view::npos) fail(ErrorCode::Format, "snapshot csv: missing header");
  const std::string_view header = text.substr(0, nl);
  constexpr std::string_view kPrefix = "# n=";
  if (header.substr(0, kPrefix.size()) != kPrefix)
    fail(ErrorCode::Format, "snapshot csv: malformed header");
  const auto sp = header.find(" times=");
  if (sp == std::string_view::npos) fail(ErrorCode::Format, "snapshot csv: malformed header");

  const std::string_view n_text = header.substr(kPrefix.size(), sp - kPrefix.size());
  std::size_t n = 0;
  if (std::from_chars(n_text.data(), n_text.data() + n_text.size(), n).ptr !=
      n_text.data() + n_text.size())
    fail(ErrorCode::Format, "snapshot csv: malformed grid size");

  std::vector<double> times;
  for (auto t : split(header.substr(sp + 7), ',')) times.push_back(parse_real(t));
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      fail(ErrorCode::Format, "snapshot csv: times must be strictly increasing");

  const PeriodicGrid grid(n);
  std::vector<std::vector<double>> cols(times.size(), std::vector<double>(n));
  std::string_view body = text.substr(nl + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const auto end = body.find('\n');
    if (end == std::string_view::npos)
      fail(ErrorCode::Format, "snapshot csv: expected " + std::to_string(n) + " rows");
    const auto cells = split(body.substr(0, end), ',');
    if (cells.size() != times.size() + 1)
      fail(ErrorCode::Format, "snapshot csv: row " + std::to_string(j) + " has " +
                                  std::to_string(cells.size()) + " columns, expected " +
                                  std::to_string(times.size() + 1));
    parse_real(cells[0]);
    for (std::size_t c = 0; c < times.size(); ++c) cols[c][j] = parse_real(cells[c + 1]);
    body = body.substr(end + 1);
  }
  if (!body.empty()) fail(ErrorCode::Format, "snapshot csv: trailing content");

  std::vector<Snapshot> out;
  for (std::size_t c = 0; c < times.size(); ++c)
    out.push_back({times[c], RealField(grid, std::move(cols[c]))});
  return out;
}

std::string format_diagnostics_csv(const std::vector<ScalarRecord>& records) {
  std::string out = "t,dt,min_u,max_u,mass,h12,dissipation\n";
  for (const auto& r : records) {
    out += format_real(r.t) + "," + format_real(r.dt) + "," + format_real(r.min_u) + "," +
           format_real(r.max_u) + "," + format_real(r.mass) + "," + format_real(r.h12) + "," +
           format_real(r.dissipation) + "\n";
  }
  return out;
}

void write_snapshot_csv(const Trajectory& traj, const std::filesystem::path& path) {
  write_atomic(path, format_snapshot_csv(traj.snapshots));
}

std::vector<Snapshot> read_snapshot_csv(const std::filesystem::path& path) {
  return parse_snapshot_csv(read_text(path));
}

void write_diagnostics_csv(const Trajectory& traj, const std::filesystem::path& path) {
  write_atomic(path, format_diagnostics_csv(traj.scalars));
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<unsigned long> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) +
         "." + std::to_string(counter++);
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) fail(ErrorCode::Io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCode::Io, "cannot rename into " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace arcflow
