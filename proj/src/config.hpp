#pragma once

// Sectioned key/value configuration:
//
//   # comment
//   [solver]
//   delta = 1e-3
//   snapshot_times = 0.25, 0.5, 1
//
// Every key is declared in a fixed schema with a type, a default and a
// constraint. Unknown keys, type mismatches and constraint violations are
// errors that name the offending key.

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "solver.hpp"

namespace arcflow {

class Config {
 public:
  using Value = std::variant<long long, double, bool, std::string, std::vector<double>>;

  // All defaults.
  Config();

  static Config parse(std::string_view text);

  // Dotted key, e.g. "solver.delta". Later calls win.
  void set(std::string_view dotted_key, std::string_view value);

  long long get_int(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  const std::string& get_string(std::string_view key) const;
  const std::vector<double>& get_list(std::string_view key) const;

  // Cross-key checks (e.g. snapshot times inside [0, t_end]).
  void validate() const;

  // Every key with its current value, grouped by section.
  std::string resolved() const;

  SolverConfig solver() const;
  std::size_t grid_size() const;

 private:
  const Value& lookup(std::string_view key) const;
  std::map<std::string, Value, std::less<>> values_;
};

// Shortest text that parses back to the same double ("inf" for infinity).
std::string format_double(double v);

}  // namespace arcflow
