#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace arcflow {

namespace {

enum class Kind { Int, Double, Bool, String, List };

struct KeySpec {
  const char* key;  // section.name
  Kind kind;
  const char* default_text;
  // Returns an empty string when valid, else the violated constraint.
  std::function<std::string(const Config::Value&)> check;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

std::function<std::string(const Config::Value&)> no_check() {
  return [](const Config::Value&) { return std::string(); };
}

std::function<std::string(const Config::Value&)> double_where(bool (*pred)(double),
                                                               const char* what) {
  return [pred, what](const Config::Value& v) {
    return pred(std::get<double>(v)) ? std::string() : std::string(what);
  };
}

std::function<std::string(const Config::Value&)> int_where(bool (*pred)(long long),
                                                            const char* what) {
  return [pred, what](const Config::Value& v) {
    return pred(std::get<long long>(v)) ? std::string() : std::string(what);
  };
}

std::function<std::string(const Config::Value&)> one_of(std::vector<std::string> options) {
  return [options](const Config::Value& v) {
    const auto& s = std::get<std::string>(v);
    if (std::find(options.begin(), options.end(), s) != options.end()) return std::string();
    std::string msg = "must be one of";
    for (const auto& o : options) msg += " " + o;
    return msg;
  };
}

std::function<std::string(const Config::Value&)> list_where(bool (*pred)(double),
                                                             const char* what) {
  return [pred, what](const Config::Value& v) {
    for (double x : std::get<std::vector<double>>(v))
      if (!pred(x)) return std::string(what);
    return std::string();
  };
}

bool positive(double x) { return x > 0.0; }
bool nonneg(double x) { return x >= 0.0 && std::isfinite(x); }
bool finite_positive(double x) { return x > 0.0 && std::isfinite(x); }
bool cfl_range(double x) { return x > 0.0 && x <= 1.0; }
bool unit_open(double x) { return x >= 0.0 && x < 1.0; }
bool finite(double x) { return std::isfinite(x); }
bool even_grid(long long n) { return n >= 16 && n % 2 == 0; }
bool positive_int(long long n) { return n > 0; }
bool nonneg_int(long long n) { return n >= 0; }
bool root_count(double x) { return x >= 2.0 && x == std::floor(x); }

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"grid.n", Kind::Int, "256", int_where(even_grid, "must be even and >= 16")},

      {"solver.delta", Kind::Double, "0", double_where(nonneg, "must be >= 0")},
      {"solver.t_end", Kind::Double, "1", double_where(finite_positive, "must be > 0")},
      {"solver.cfl", Kind::Double, "0.5", double_where(cfl_range, "must lie in (0, 1]")},
      {"solver.dt_max", Kind::Double, "inf", double_where(positive, "must be > 0")},
      {"solver.snapshot_times", Kind::List, "", list_where(nonneg, "entries must be >= 0")},
      {"solver.snapshot_count", Kind::Int, "10", int_where(positive_int, "must be > 0")},
      {"solver.dealias", Kind::Bool, "false", no_check()},
      {"solver.pos_floor", Kind::Double, "1e-10", double_where(finite, "must be finite")},
      {"solver.seed", Kind::Int, "0", int_where(nonneg_int, "must be >= 0")},
      {"solver.model", Kind::String, "full", one_of({"full", "heat"})},
      {"solver.max_steps", Kind::Int, "10000000", int_where(positive_int, "must be > 0")},

      {"initial.kind", Kind::String, "cosine", one_of({"cosine", "rough", "bump"})},
      {"initial.mean", Kind::Double, "1", double_where(finite_positive, "must be > 0")},
      {"initial.amplitude", Kind::Double, "0.3", double_where(nonneg, "must be >= 0")},
      {"initial.mode", Kind::Int, "1", int_where(positive_int, "must be > 0")},
      {"initial.eta", Kind::Double, "0.01", double_where(finite_positive, "must be > 0")},
      {"initial.c0", Kind::Double, "1", double_where(finite_positive, "must be > 0")},

      {"checks.extremum_tol", Kind::Double, "1e-8", double_where(nonneg, "must be >= 0")},
      {"checks.energy_ratio_max", Kind::Double, "10", double_where(finite_positive, "must be > 0")},
      {"checks.mass_tol", Kind::Double, "1e-10", double_where(nonneg, "must be >= 0")},
      {"checks.mass_delta_factor", Kind::Double, "10", double_where(nonneg, "must be >= 0")},

      {"sweep.deltas", Kind::List, "0.01, 0.005, 0.0025, 0.00125",
       list_where(finite_positive, "entries must be > 0")},

      {"smoothing.s", Kind::Double, "2", double_where(finite_positive, "must be > 0")},
      {"smoothing.eps0", Kind::Double, "0.1", double_where(finite_positive, "must be > 0")},
      {"smoothing.t_min", Kind::Double, "0.01", double_where(finite_positive, "must be > 0")},
      {"smoothing.snapshot_count", Kind::Int, "25", int_where(positive_int, "must be > 0")},
      {"smoothing.slope_min", Kind::Double, "-2.6", double_where(finite, "must be finite")},
      {"smoothing.require_sup_at_start", Kind::Bool, "false", no_check()},

      {"stability.perturbations", Kind::List, "0.001, 0.0005, 0.00025",
       list_where(finite_positive, "entries must be > 0")},
      {"stability.growth_max", Kind::Double, "20", double_where(finite_positive, "must be > 0")},
      {"stability.linearity_tol", Kind::Double, "0.2", double_where(nonneg, "must be >= 0")},

      {"roots.counts", Kind::List, "100, 200, 400",
       list_where(root_count, "entries must be integers >= 2")},
      {"roots.t", Kind::Double, "0.3", double_where(unit_open, "must lie in [0, 1)")},
      {"roots.half_width", Kind::Double, "1.5", double_where(finite_positive, "must be > 0")},
      {"roots.margin", Kind::Double, "0.5", double_where(finite_positive, "must be > 0")},
      {"roots.floor", Kind::Double, "0.001", double_where(finite_positive, "must be > 0")},
      {"roots.grid_n", Kind::Int, "512", int_where(even_grid, "must be even and >= 16")},
      {"roots.normalize", Kind::Bool, "true", no_check()},
      {"roots.w1_max", Kind::Double, "0.1", double_where(finite_positive, "must be > 0")},

      {"operators.n", Kind::Int, "256", int_where(even_grid, "must be even and >= 16")},
      {"operators.random_fields", Kind::Int, "100", int_where(positive_int, "must be > 0")},
  };
  return keys;
}

const KeySpec* find_key(std::string_view key) {
  for (const auto& k : schema())
    if (key == k.key) return &k;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(std::string_view key, const std::string& what) {
  fail(ErrorCode::Config, std::string(key) + ": " + what);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return kInf;
  if (text == "-inf") return -kInf;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    config_error(key, "expected a real number, got '" + std::string(text) + "'");
  return v;
}

long long parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    config_error(key, "expected an integer, got '" + std::string(text) + "'");
  return v;
}

Config::Value parse_value(const KeySpec& spec, std::string_view text) {
  text = trim(text);
  switch (spec.kind) {
    case Kind::Int:
      return parse_int(spec.key, text);
    case Kind::Double:
      return parse_double(spec.key, text);
    case Kind::Bool:
      if (text == "true") return true;
      if (text == "false") return false;
      config_error(spec.key, "expected true or false, got '" + std::string(text) + "'");
    case Kind::String:
      return std::string(text);
    case Kind::List: {
      std::vector<double> out;
      while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_double(spec.key, text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
      }
      return out;
    }
  }
  config_error(spec.key, "unsupported type");
}

std::string format_value(const Config::Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, long long>) return std::to_string(x);
        if constexpr (std::is_same_v<T, double>) return format_double(x);
        if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        if constexpr (std::is_same_v<T, std::string>) return x;
        if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::string s;
          for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + format_double(x[i]);
          return s;
        }
      },
      v);
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Config::Config() {
  for (const auto& k : schema()) values_[k.key] = parse_value(k, k.default_text);
}

void Config::set(std::string_view dotted_key, std::string_view value) {
  const KeySpec* spec = find_key(trim(dotted_key));
  if (!spec) config_error(trim(dotted_key), "unknown key");
  Value v = parse_value(*spec, value);
  const std::string problem = spec->check(v);
  if (!problem.empty()) config_error(spec->key, problem);
  values_[spec->key] = std::move(v);
}

Config Config::parse(std::string_view text) {
  Config cfg;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        fail(ErrorCode::Config, "line " + std::to_string(line_no) + ": malformed section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorCode::Config, "line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty())
      fail(ErrorCode::Config, "line " + std::to_string(line_no) + ": key outside a section");
    cfg.set(section + "." + std::string(trim(line.substr(0, eq))), line.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

const Config::Value& Config::lookup(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) config_error(key, "unknown key");
  return it->second;
}

long long Config::get_int(std::string_view key) const { return std::get<long long>(lookup(key)); }
double Config::get_double(std::string_view key) const { return std::get<double>(lookup(key)); }
bool Config::get_bool(std::string_view key) const { return std::get<bool>(lookup(key)); }
const std::string& Config::get_string(std::string_view key) const {
  return std::get<std::string>(lookup(key));
}
const std::vector<double>& Config::get_list(std::string_view key) const {
  return std::get<std::vector<double>>(lookup(key));
}

void Config::validate() const {
  const double t_end = get_double("solver.t_end");
  const auto& snaps = get_list("solver.snapshot_times");
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    if (snaps[i] > t_end) config_error("solver.snapshot_times", "entries must be <= t_end");
    if (i > 0 && !(snaps[i] > snaps[i - 1]))
      config_error("solver.snapshot_times", "entries must be strictly increasing");
  }
  const auto& deltas = get_list("sweep.deltas");
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] < deltas[i - 1]))
      config_error("sweep.deltas", "entries must be strictly decreasing");
  if (get_double("smoothing.t_min") >= t_end)
    config_error("smoothing.t_min", "must be < solver.t_end");
  if (get_double("roots.half_width") + get_double("roots.margin") >= 3.141592653589793)
    config_error("roots.half_width", "support plus margin must stay inside (-pi, pi)");
}

std::string Config::resolved() const {
  std::ostringstream out;
  out << "# resolved configuration\n";
  std::string section;
  for (const auto& k : schema()) {
    const std::string_view key = k.key;
    const auto dot = key.find('.');
    const std::string sec(key.substr(0, dot));
    if (sec != section) {
      out << (section.empty() ? "" : "\n") << "[" << sec << "]\n";
      section = sec;
    }
    out << key.substr(dot + 1) << " = " << format_value(lookup(key)) << "\n";
  }
  return out.str();
}

SolverConfig Config::solver() const {
  SolverConfig s;
  s.delta = get_double("solver.delta");
  s.t_end = get_double("solver.t_end");
  s.cfl = get_double("solver.cfl");
  s.dt_max = get_double("solver.dt_max");
  s.snapshot_times = get_list("solver.snapshot_times");
  if (s.snapshot_times.empty()) {
    const auto count = static_cast<std::size_t>(get_int("solver.snapshot_count"));
    for (std::size_t i = 1; i <= count; ++i)
      s.snapshot_times.push_back(i == count ? s.t_end
                                            : s.t_end * static_cast<double>(i) /
                                                  static_cast<double>(count));
  }
  s.dealias = get_bool("solver.dealias");
  s.pos_floor = get_double("solver.pos_floor");
  s.seed = static_cast<std::uint64_t>(get_int("solver.seed"));
  s.model = get_string("solver.model") == "heat" ? Model::HeatOnly : Model::Full;
  s.max_steps = static_cast<std::size_t>(get_int("solver.max_steps"));
  return s;
}

std::size_t Config::grid_size() const { return static_cast<std::size_t>(get_int("grid.n")); }

}  // namespace arcflow
