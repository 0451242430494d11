#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "csv_io.hpp"
#include "diagnostics.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "roots.hpp"
#include "solver.hpp"

namespace arcflow {

namespace {

namespace fs = std::filesystem;

std::string num(double v) { return format_real(v); }

Check ge(std::string name, CheckCategory cat, double value, double threshold) {
  const bool ok = value >= threshold;
  return {std::move(name), cat, ok,
          "value = " + num(value) + ", required >= " + num(threshold)};
}

Check le(std::string name, CheckCategory cat, double value, double threshold) {
  const bool ok = value <= threshold;
  return {std::move(name), cat, ok,
          "value = " + num(value) + ", required <= " + num(threshold)};
}

Check lt(std::string name, CheckCategory cat, double value, double threshold) {
  const bool ok = value < threshold;
  return {std::move(name), cat, ok, "value = " + num(value) + ", required < " + num(threshold)};
}

double max_mass_drift(const Trajectory& traj) {
  const double m0 = traj.scalars.front().mass;
  double d = 0.0;
  for (const auto& r : traj.scalars) d = std::max(d, std::abs(r.mass - m0));
  return d;
}

// Maximum principle, energy inequality and mass checks for one run.
void add_run_checks(Report& rep, const Trajectory& traj, const Config& cfg,
                    const std::string& tag) {
  const double t_end = traj.scalars.back().t;
  const ExtremumReport ex = extremum_report(traj);
  const double tol = cfg.get_double("checks.extremum_tol") * t_end;
  rep.values.emplace_back(tag + "min_drift", num(ex.min_drift));
  rep.values.emplace_back(tag + "max_drift", num(ex.max_drift));
  rep.checks.push_back(ge(tag + "min_drift", CheckCategory::MaximumPrinciple, ex.min_drift, -tol));
  rep.checks.push_back(le(tag + "max_drift", CheckCategory::MaximumPrinciple, ex.max_drift, tol));

  const double limit = cfg.get_double("checks.energy_ratio_max");
  const EnergyBudget eb = energy_budget(traj, limit);
  rep.values.emplace_back(tag + "h12_sq_sup", num(eb.h12_sq_sup));
  rep.values.emplace_back(tag + "dissipation_cum", num(eb.dissipation_cum));
  rep.values.emplace_back(tag + "initial_h12_sq", num(eb.initial_h12_sq));
  rep.values.emplace_back(tag + "energy_ratio", num(eb.bound_ratio));
  rep.checks.push_back(le(tag + "energy_ratio", CheckCategory::Energy, eb.bound_ratio, limit));

  if (t_end > 0.0) {
    const double drift = max_mass_drift(traj) / t_end;
    const double bound = traj.delta == 0.0
                             ? cfg.get_double("checks.mass_tol")
                             : cfg.get_double("checks.mass_delta_factor") * traj.delta;
    rep.values.emplace_back(tag + "mass_drift_rate", num(drift));
    rep.checks.push_back(le(tag + "mass_drift_rate", CheckCategory::Mass, drift, bound));
  }
  rep.values.emplace_back(tag + "steps", std::to_string(traj.scalars.size() - 1));
}

void write_run(const Trajectory& traj, const fs::path& dir, const std::string& stem) {
  write_snapshot_csv(traj, dir / (stem + "snapshots.csv"));
  write_diagnostics_csv(traj, dir / (stem + "diagnostics.csv"));
}

Report run_solve(const Config& cfg, const fs::path& out) {
  Report rep{"solve", {}, {}};
  const PeriodicGrid grid(cfg.grid_size());
  const Trajectory traj = solve(make_initial(cfg, grid), cfg.solver());
  write_run(traj, out, "");
  add_run_checks(rep, traj, cfg, "");
  return rep;
}

Report run_sweep(const Config& cfg, const fs::path& out) {
  Report rep{"sweep-delta", {}, {}};
  const PeriodicGrid grid(cfg.grid_size());
  const SolverConfig scfg = cfg.solver();
  const auto& deltas = cfg.get_list("sweep.deltas");
  const auto members = delta_continuation(make_initial(cfg, grid), deltas, scfg.t_end, scfg);

  std::vector<std::future<void>> writes;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::string stem = "member" + std::to_string(i) + "_";
    writes.push_back(std::async(std::launch::async, [&members, i, &out, stem] {
      write_run(members[i].trajectory, out, stem);
    }));
  }
  for (auto& w : writes) w.get();

  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::string tag = "member" + std::to_string(i) + ".";
    rep.values.emplace_back(tag + "delta", num(members[i].delta));
    if (members[i].distance_h12) {
      rep.values.emplace_back(tag + "distance_h12", num(*members[i].distance_h12));
      rep.values.emplace_back(tag + "distance_l2", num(*members[i].distance_l2));
    }
  }
  for (std::size_t i = 2; i < members.size(); ++i) {
    const double prev = *members[i - 1].distance_h12;
    const double cur = *members[i].distance_h12;
    rep.checks.push_back(lt("distance_h12_decreasing." + std::to_string(i),
                            CheckCategory::Continuation, cur, prev));
  }
  for (std::size_t i = 1; i < members.size(); ++i) {
    const double d = *members[i].distance_h12;
    rep.checks.push_back({"distance_finite." + std::to_string(i), CheckCategory::Continuation,
                          std::isfinite(d), "value = " + num(d)});
  }
  return rep;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> t;
  if (count == 1) return {hi};
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    t.push_back(i + 1 == count ? hi : lo * std::pow(hi / lo, f));
  }
  return t;
}

Report run_smoothing(const Config& cfg, const fs::path& out) {
  Report rep{"smoothing", {}, {}};
  const PeriodicGrid grid(cfg.grid_size());
  SolverConfig scfg = cfg.solver();
  const double t_min = cfg.get_double("smoothing.t_min");
  scfg.snapshot_times =
      log_spaced(t_min, scfg.t_end, static_cast<std::size_t>(cfg.get_int("smoothing.snapshot_count")));
  const Trajectory traj = solve(make_initial(cfg, grid), scfg);
  write_run(traj, out, "");

  const double s = cfg.get_double("smoothing.s");
  const double eps0 = cfg.get_double("smoothing.eps0");
  const SmoothingReport sm = smoothing_fit(traj, s, eps0, t_min);
  rep.values.emplace_back("s", num(s));
  rep.values.emplace_back("eps0", num(eps0));
  rep.values.emplace_back("sup_weighted", num(sm.sup_weighted));
  rep.values.emplace_back("sup_time", num(sm.sup_time));
  rep.values.emplace_back("slope", num(sm.slope));
  rep.checks.push_back(
      ge("slope", CheckCategory::Smoothing, sm.slope, cfg.get_double("smoothing.slope_min")));
  rep.checks.push_back({"sup_weighted_finite", CheckCategory::Smoothing,
                        std::isfinite(sm.sup_weighted), "value = " + num(sm.sup_weighted)});
  if (cfg.get_bool("smoothing.require_sup_at_start"))
    rep.checks.push_back(le("sup_time", CheckCategory::Smoothing, sm.sup_time, t_min));
  add_run_checks(rep, traj, cfg, "");
  return rep;
}

Report run_stability(const Config& cfg, const fs::path& out) {
  Report rep{"stability", {}, {}};
  const PeriodicGrid grid(cfg.grid_size());
  const SolverConfig scfg = cfg.solver();
  const RealField base = make_initial(cfg, grid);
  const auto& eps = cfg.get_list("stability.perturbations");
  const RealField cosx = RealField::sample(grid, [](double x) { return std::cos(x); });

  std::vector<std::future<Trajectory>> runs;
  runs.push_back(std::async(std::launch::async, [&] { return solve(base, scfg); }));
  for (double e : eps)
    runs.push_back(std::async(std::launch::async,
                              [&, e] { return solve(base + e * cosx, scfg); }));
  std::vector<Trajectory> trajs;
  for (auto& r : runs) trajs.push_back(r.get());

  std::vector<StabilityReport> reports;
  const double growth_max = cfg.get_double("stability.growth_max");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    reports.push_back(stability_compare(trajs[0], trajs[i + 1]));
    const std::string tag = "perturbation" + std::to_string(i);
    rep.values.emplace_back(tag + ".size", num(eps[i]));
    rep.values.emplace_back(tag + ".growth_factor", num(reports.back().growth_factor));
    rep.checks.push_back(lt(tag + ".growth_factor", CheckCategory::Stability,
                            reports.back().growth_factor, growth_max));
  }

  // d(t)/eps must agree across perturbation sizes (first-order regime).
  const double tol = cfg.get_double("stability.linearity_tol");
  for (std::size_t i = 1; i < reports.size(); ++i) {
    double worst = 0.0;
    for (std::size_t s = 0; s < reports[0].times.size(); ++s) {
      const double ref = reports[0].distances[s] / eps[0];
      const double cur = reports[i].distances[s] / eps[i];
      if (ref > 0.0) worst = std::max(worst, std::abs(cur - ref) / ref);
    }
    rep.checks.push_back(le("linearity." + std::to_string(i), CheckCategory::Stability, worst, tol));
  }

  std::string csv = "t";
  for (std::size_t i = 0; i < eps.size(); ++i) csv += ",d" + std::to_string(i);
  csv += "\n";
  for (std::size_t s = 0; s < reports[0].times.size(); ++s) {
    csv += num(reports[0].times[s]);
    for (const auto& r : reports) csv += "," + num(r.distances[s]);
    csv += "\n";
  }
  write_atomic(out / "stability.csv", csv);
  write_run(trajs[0], out, "base_");
  return rep;
}

Report run_roots(const Config& cfg, const fs::path& out) {
  Report rep{"roots-compare", {}, {}};
  const PeriodicGrid grid(static_cast<std::size_t>(cfg.get_int("roots.grid_n")));
  const double half_width = cfg.get_double("roots.half_width");
  const double floor_level = cfg.get_double("roots.floor");
  const double t = cfg.get_double("roots.t");
  const bool normalize = cfg.get_bool("roots.normalize");

  const RealField bump =
      RealField::sample(grid, [half_width](double x) { return unit_bump(x, half_width); });
  const RealField lifted = bump + RealField::constant(grid, floor_level);

  SolverConfig scfg = cfg.solver();
  scfg.t_end = t;
  scfg.snapshot_times.clear();
  const Trajectory traj = solve(lifted, scfg);
  write_run(traj, out, "");

  const TabulatedDensity unrolled =
      TabulatedDensity::from_field(traj.snapshots.back().u, std::numeric_limits<double>::infinity());
  const TabulatedDensity component = basin_component(unrolled, 0.0);
  rep.values.emplace_back("component_left", num(component.x.front()));
  rep.values.emplace_back("component_right", num(component.x.back()));
  rep.values.emplace_back("component_mass", num(component.mass()));

  const TabulatedDensity initial = TabulatedDensity::from_field(bump);
  const double w1_max = cfg.get_double("roots.w1_max");
  std::string csv = "n,roots_left,roots_right,w1\n";
  std::vector<double> w1s;
  for (double count : cfg.get_list("roots.counts")) {
    const auto n = static_cast<std::size_t>(count);
    const RootEnsemble flowed = root_flow(quantile_sample(initial, n), t);
    const double w1 = wasserstein1(flowed, component, normalize);
    w1s.push_back(w1);
    const std::string tag = "n" + std::to_string(n);
    rep.values.emplace_back(tag + ".w1", num(w1));
    rep.checks.push_back(lt(tag + ".w1", CheckCategory::Roots, w1, w1_max));
    csv += std::to_string(n) + "," + num(flowed.roots().front()) + "," +
           num(flowed.roots().back()) + "," + num(w1) + "\n";
  }
  for (std::size_t i = 1; i < w1s.size(); ++i)
    rep.checks.push_back(
        le("w1_nonincreasing." + std::to_string(i), CheckCategory::Roots, w1s[i], w1s[i - 1]));
  write_atomic(out / "roots.csv", csv);
  return rep;
}

double rel_error(const RealField& got, const RealField& want) {
  return linf_norm(got - want) / std::max(1.0, linf_norm(want));
}

Report run_operators(const Config& cfg, const fs::path& out) {
  Report rep{"check-operators", {}, {}};
  const PeriodicGrid grid(static_cast<std::size_t>(cfg.get_int("operators.n")));
  const auto fields = static_cast<std::size_t>(cfg.get_int("operators.random_fields"));
  const auto seed = static_cast<std::uint64_t>(cfg.get_int("solver.seed"));
  const auto mode = [&](double k, bool sine) {
    return RealField::sample(grid, [k, sine](double x) { return sine ? std::sin(k * x) : std::cos(k * x); });
  };

  double pure = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double kk = k;
    pure = std::max(pure, rel_error(hilbert(mode(kk, false)), mode(kk, true)));
    pure = std::max(pure, rel_error(hilbert(mode(kk, true)), -1.0 * mode(kk, false)));
    pure = std::max(pure, rel_error(frac_laplacian(mode(kk, false)), kk * mode(kk, false)));
    pure = std::max(pure, rel_error(derivative(mode(kk, true)), kk * mode(kk, false)));
    pure = std::max(pure, rel_error(heat_propagate(mode(kk, false), 0.5),
                                    std::exp(-0.5 * kk * kk) * mode(kk, false)));
  }
  rep.checks.push_back(le("pure_modes", CheckCategory::Operators, pure, 1e-12));

  double identity = 0.0, hh = 0.0, parseval = 0.0, roundtrip = 0.0;
  for (std::size_t i = 0; i < fields; ++i) {
    const RealField f = random_band_limited(grid, grid.kmax() - 1, seed + i);
    identity = std::max(identity, rel_error(derivative(hilbert(f)), frac_laplacian(f)));
    hh = std::max(hh, rel_error(hilbert(hilbert(f)),
                                RealField::constant(grid, f.mean()) - f));
    const SpectralField F = forward(f);
    double spec = 0.0;
    for (std::size_t k = 0; k < F.coeffs().size(); ++k)
      spec += (k == 0 || k == grid.kmax() ? 1.0 : 2.0) * std::norm(F.coeffs()[k]);
    const double l2 = l2_norm(f);
    parseval = std::max(parseval, std::abs(l2 * l2 - 2.0 * std::numbers::pi * spec) / (l2 * l2));
    roundtrip = std::max(roundtrip, rel_error(inverse(F), f));
  }
  rep.checks.push_back(le("lambda_equals_dx_hilbert", CheckCategory::Operators, identity, 1e-12));
  rep.checks.push_back(le("hilbert_squared", CheckCategory::Operators, hh, 1e-12));
  rep.checks.push_back(le("parseval", CheckCategory::Operators, parseval, 1e-12));
  rep.checks.push_back(le("round_trip", CheckCategory::Operators, roundtrip, 1e-12));

  double kernel = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const RealField f = random_band_limited(grid, 16, seed + 1000 + i, 2.0);
    kernel = std::max(kernel, linf_norm(frac_laplacian_kernel(f, 4 * grid.size()) -
                                        frac_laplacian(f)));
  }
  rep.checks.push_back(le("kernel_vs_multiplier", CheckCategory::Operators, kernel, 1e-4));

  std::string csv = "check,value\n";
  for (const auto& c : rep.checks) csv += c.name + "," + c.detail.substr(8, c.detail.find(',') - 8) + "\n";
  write_atomic(out / "operators.csv", csv);
  return rep;
}

}  // namespace

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

int Report::exit_code() const {
  for (const auto& c : checks)
    if (!c.passed) return static_cast<int>(c.category);
  return 0;
}

std::string Report::summary() const {
  std::ostringstream s;
  s << "# " << command << "\n";
  for (const auto& [k, v] : values) s << k << " = " << v << "\n";
  for (const auto& c : checks) s << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  s << (passed() ? "RESULT PASS" : "RESULT FAIL") << "\n";
  return s.str();
}

double unit_bump(double x, double half_width) {
  const double two_pi = 2.0 * std::numbers::pi;
  x = std::remainder(x, two_pi);
  const double y = x / half_width;
  if (std::abs(y) >= 1.0) return 0.0;
  // Mass of exp(-1/(1 - y^2)) over [-1, 1].
  constexpr double kBumpMass = 0.44399381616807943;
  return std::exp(-1.0 / (1.0 - y * y)) / (kBumpMass * half_width);
}

RealField make_initial(const Config& cfg, const PeriodicGrid& grid) {
  const std::string& kind = cfg.get_string("initial.kind");
  if (kind == "rough") {
    RoughSpec spec;
    spec.eta = cfg.get_double("initial.eta");
    spec.c0 = cfg.get_double("initial.c0");
    spec.amplitude = cfg.get_double("initial.amplitude");
    return rough_initial(grid, spec, static_cast<std::uint64_t>(cfg.get_int("solver.seed")));
  }
  if (kind == "bump") {
    const double hw = cfg.get_double("roots.half_width");
    const double floor_level = cfg.get_double("roots.floor");
    return RealField::sample(grid, [=](double x) { return unit_bump(x, hw) + floor_level; });
  }
  const double mean = cfg.get_double("initial.mean");
  const double amp = cfg.get_double("initial.amplitude");
  const double k = static_cast<double>(cfg.get_int("initial.mode"));
  if (!(mean - amp > 0.0))
    fail(ErrorCode::Config, "initial.amplitude: cosine datum must stay positive");
  return RealField::sample(grid, [=](double x) { return mean + amp * std::cos(k * x); });
}

RealField random_band_limited(const PeriodicGrid& grid, std::size_t band, std::uint64_t seed,
                              double mean) {
  if (band >= grid.kmax())
    fail(ErrorCode::InvalidArgument, "band must stay below the Nyquist wavenumber");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> a(band + 1), b(band + 1);
  for (std::size_t k = 1; k <= band; ++k) {
    a[k] = normal(rng) / static_cast<double>(k);
    b[k] = normal(rng) / static_cast<double>(k);
  }
  return RealField::sample(grid, [&](double x) {
    double v = mean;
    for (std::size_t k = 1; k <= band; ++k) {
      const double kx = static_cast<double>(k) * x;
      v += a[k] * std::cos(kx) + b[k] * std::sin(kx);
    }
    return v;
  });
}

Report run_experiment(const std::string& command, const Config& cfg, const fs::path& out_dir) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    fail(ErrorCode::Io, "cannot create output directory " + out_dir.string());
  write_atomic(out_dir / "resolved.cfg", cfg.resolved());

  Report rep;
  if (command == "solve")
    rep = run_solve(cfg, out_dir);
  else if (command == "sweep-delta")
    rep = run_sweep(cfg, out_dir);
  else if (command == "smoothing")
    rep = run_smoothing(cfg, out_dir);
  else if (command == "stability")
    rep = run_stability(cfg, out_dir);
  else if (command == "roots-compare")
    rep = run_roots(cfg, out_dir);
  else if (command == "check-operators")
    rep = run_operators(cfg, out_dir);
  else
    fail(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
  write_atomic(out_dir / "summary.txt", rep.summary());
  return rep;
}

}  // namespace arcflow
