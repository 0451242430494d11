#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <string>

#include "diagnostics.hpp"
#include "dynamics.hpp"
#include "error.hpp"

namespace arcflow {

namespace {

using Complex = std::complex<double>;

// Relative slack when matching clock values against snapshot targets.
constexpr double kTimeSlack = 1e-13;

std::vector<double> snapshot_targets(const SolverConfig& cfg) {
  std::vector<double> times = cfg.snapshot_times;
  times.push_back(0.0);
  times.push_back(cfg.t_end);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

double next_target(double t, const SolverConfig& cfg) {
  const double slack = kTimeSlack * std::max(1.0, cfg.t_end);
  for (double s : cfg.snapshot_times)
    if (s > t + slack && s < cfg.t_end) return s;
  return cfg.t_end;
}

SpectralField integrating_factor(const SpectralField& F, double delta, double dt) {
  if (delta == 0.0) return F;
  return apply_multiplier(F, [delta, dt](long k) -> Complex {
    const double kk = static_cast<double>(k);
    return std::exp(-delta * kk * kk * dt);
  });
}

SpectralField axpy(const SpectralField& x, double a, const SpectralField& y) {
  std::vector<Complex> out(x.coeffs().begin(), x.coeffs().end());
  const auto yc = y.coeffs();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += a * yc[k];
  return SpectralField(x.grid(), std::move(out));
}

void check_positive(const RealField& u, const SolverConfig& cfg, double t) {
  if (!(u.min() > cfg.pos_floor))
    fail(ErrorCode::PositivityViolation,
         "positivity abort at t = " + std::to_string(t) + ": min u = " +
             std::to_string(u.min()) + " <= floor " + std::to_string(cfg.pos_floor));
}

}  // namespace

void SolverConfig::validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    fail(ErrorCode::InvalidArgument, "delta must be finite and >= 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    fail(ErrorCode::InvalidArgument, "t_end must be finite and >= 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail(ErrorCode::InvalidArgument, "cfl must lie in (0, 1]");
  if (!(dt_max > 0.0)) fail(ErrorCode::InvalidArgument, "dt_max must be > 0");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    fail(ErrorCode::InvalidArgument, "snapshot_times must be sorted");
  for (double s : snapshot_times)
    if (!(s >= 0.0 && s <= t_end))
      fail(ErrorCode::InvalidArgument, "snapshot_times must lie in [0, t_end]");
  if (max_steps == 0) fail(ErrorCode::InvalidArgument, "max_steps must be positive");
}

RealField mollified_initial(const RealField& u0, double delta) {
  if (!(u0.min() > 0.0))
    fail(ErrorCode::PositivityViolation, "initial data must be positive");
  if (!(delta >= 0.0)) fail(ErrorCode::InvalidArgument, "delta must be >= 0");
  return heat_propagate(u0, delta);
}

RealField stepper_tendency(const RealField& u, const SolverConfig& cfg) {
  if (cfg.model == Model::HeatOnly) return RealField::constant(u.grid(), 0.0);
  RealField n = nonlinear_tendency(u, cfg.delta, cfg.dealias);
  if (cfg.delta > 0.0) return n;
  // At delta = 0 the exact tendency is a derivative; its grid mean is pure
  // aliasing and is projected out so that mass is conserved.
  const double m = n.mean();
  std::vector<double> v(n.values().begin(), n.values().end());
  for (double& x : v) x -= m;
  return RealField(u.grid(), std::move(v));
}

double stable_dt(const SolverState& state, const SolverConfig& cfg) {
  double dt = cfg.dt_max;
  if (cfg.model == Model::Full) {
    const Coefficients c = coefficients(state.u, cfg.delta);
    const double gmax = c.gamma.max();
    const double vmax = std::max(linf_norm(c.velocity), 1e-12);
    const double kmax = static_cast<double>(state.u.grid().kmax());
    if (gmax > 0.0) dt = std::min(dt, 1.0 / (gmax * kmax));
    dt = std::min(dt, state.u.grid().dx() / vmax);
  }
  dt *= cfg.cfl;
  const double remaining = next_target(state.t, cfg) - state.t;
  return std::min(dt, remaining);
}

SolverState step(const SolverState& state, double dt, const SolverConfig& cfg) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "step: dt must be > 0");
  const SpectralField U = forward(state.u);
  const SpectralField N0 = forward(stepper_tendency(state.u, cfg));

  const SpectralField U1 = integrating_factor(axpy(U, dt, N0), cfg.delta, dt);
  const RealField u1 = inverse(U1);
  check_positive(u1, cfg, state.t + dt);
  const SpectralField N1 = forward(stepper_tendency(u1, cfg));

  const SpectralField base = integrating_factor(axpy(U, 0.5 * dt, N0), cfg.delta, dt);
  RealField next = inverse(axpy(base, 0.5 * dt, N1));
  check_positive(next, cfg, state.t + dt);
  return {state.t + dt, std::move(next), state.step_count + 1, dt};
}

ScalarRecord record(const SolverState& state, double delta) {
  const RealField& u = state.u;
  return {state.t,
          state.last_dt,
          u.min(),
          u.max(),
          mass(u),
          sobolev_seminorm(u, 0.5),
          dissipation(u, delta)};
}

Trajectory solve(const RealField& u0, const SolverConfig& cfg) {
  cfg.validate();
  Trajectory traj;
  traj.delta = cfg.delta;

  SolverState state{0.0, mollified_initial(u0, cfg.delta), 0, 0.0};
  check_positive(state.u, cfg, 0.0);
  traj.scalars.push_back(record(state, cfg.delta));

  const std::vector<double> targets = snapshot_targets(cfg);
  std::size_t next_snap = 0;
  const double slack = kTimeSlack * std::max(1.0, cfg.t_end);
  auto take_snapshots = [&] {
    while (next_snap < targets.size() && targets[next_snap] <= state.t + slack) {
      traj.snapshots.push_back({targets[next_snap], state.u});
      ++next_snap;
    }
  };
  take_snapshots();

  while (state.t < cfg.t_end - slack) {
    if (state.step_count >= cfg.max_steps)
      fail(ErrorCode::InvalidArgument,
           "step budget exhausted at t = " + std::to_string(state.t));
    const double target = next_target(state.t, cfg);
    const double dt = stable_dt(state, cfg);
    state = step(state, dt, cfg);
    // Land exactly on snapshot times instead of accumulating rounding.
    if (std::abs(state.t - target) <= slack) state.t = target;
    traj.scalars.push_back(record(state, cfg.delta));
    take_snapshots();
  }
  return traj;
}

std::vector<ContinuationMember> delta_continuation(const RealField& u0,
                                                   const std::vector<double>& deltas,
                                                   double t_end, const SolverConfig& cfg) {
  if (deltas.empty()) fail(ErrorCode::InvalidArgument, "delta_continuation: no deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0))
      fail(ErrorCode::InvalidArgument, "delta_continuation: deltas must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      fail(ErrorCode::InvalidArgument, "delta_continuation: deltas must strictly decrease");
  }

  std::vector<std::future<Trajectory>> runs;
  runs.reserve(deltas.size());
  for (double d : deltas) {
    SolverConfig member = cfg;
    member.delta = d;
    member.t_end = t_end;
    runs.push_back(std::async(std::launch::async, [u0, member] { return solve(u0, member); }));
  }

  std::vector<ContinuationMember> out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    Trajectory traj;
    try {
      traj = runs[i].get();
    } catch (const Error& e) {
      throw Error(e.code(), "delta = " + std::to_string(deltas[i]) + ": " + e.what());
    }
    out.push_back({deltas[i], std::move(traj), std::nullopt, std::nullopt});
  }

  for (std::size_t i = 1; i < out.size(); ++i) {
    const auto& prev = out[i - 1].trajectory.snapshots;
    const auto& cur = out[i].trajectory.snapshots;
    if (prev.size() != cur.size())
      fail(ErrorCode::GridMismatch, "continuation members disagree on snapshot grid");
    double h12 = 0.0, l2 = 0.0;
    for (std::size_t s = 0; s < cur.size(); ++s) {
      const RealField diff = cur[s].u - prev[s].u;
      h12 = std::max(h12, sobolev_seminorm(diff, 0.5));
      l2 = std::max(l2, l2_norm(diff));
    }
    out[i].distance_h12 = h12;
    out[i].distance_l2 = l2;
  }
  return out;
}

RealField rough_initial(const PeriodicGrid& grid, const RoughSpec& spec, std::uint64_t seed) {
  if (!(spec.eta > 0.0)) fail(ErrorCode::InvalidArgument, "rough data: eta must be > 0");
  if (!(spec.amplitude > 0.0))
    fail(ErrorCode::InvalidArgument, "rough data: amplitude must be > 0");
  if (!(spec.c0 > 0.0)) fail(ErrorCode::InvalidArgument, "rough data: c0 must be > 0");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const std::size_t nyq = grid.kmax();
  std::vector<Complex> c(nyq + 1, Complex{});
  for (std::size_t k = 1; k <= nyq; ++k) {
    const double amp = std::pow(1.0 + static_cast<double>(k), -1.0 - spec.eta);
    const double theta = phase(rng);
    c[k] = (k == nyq) ? Complex(amp * std::cos(theta), 0.0) : std::polar(amp, theta);
  }
  const RealField fluct = inverse(SpectralField(grid, std::move(c)));
  const double scale = spec.amplitude / linf_norm(fluct);
  const double offset = spec.c0 - scale * fluct.min();
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = offset + scale * fluct[j];
  return RealField(grid, std::move(v));
}

}  // namespace arcflow
