#pragma once

// Experiment drivers behind the CLI subcommands. Each driver writes its
// files into an output directory and returns a report whose checks decide
// the process exit code.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "spectral.hpp"

namespace arcflow {

// Exit codes for the first failed check; 0 means everything passed.
enum class CheckCategory : int {
  Operators = 10,
  MaximumPrinciple = 11,
  Energy = 12,
  Mass = 13,
  Smoothing = 14,
  Stability = 15,
  Continuation = 16,
  Roots = 17,
};

struct Check {
  std::string name;
  CheckCategory category;
  bool passed;
  std::string detail;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<Check> checks;

  bool passed() const;
  int exit_code() const;
  std::string summary() const;
};

inline const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> commands = {
      "solve", "sweep-delta", "smoothing", "stability", "roots-compare", "check-operators"};
  return commands;
}

Report run_experiment(const std::string& command, const Config& cfg,
                      const std::filesystem::path& out_dir);

// Initial datum selected by initial.kind on the given grid.
RealField make_initial(const Config& cfg, const PeriodicGrid& grid);

// Smooth compactly supported bump of unit mass on [-half_width, half_width],
// evaluated at x taken modulo 2pi into [-pi, pi).
double unit_bump(double x, double half_width);

// mean + sum_{k=1}^{band} (a_k cos kx + b_k sin kx), a_k, b_k ~ N(0, 1)/k.
RealField random_band_limited(const PeriodicGrid& grid, std::size_t band, std::uint64_t seed,
                              double mean = 0.0);

}  // namespace arcflow
