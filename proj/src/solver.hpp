#pragma once

// Time integration of the regularized equation. The delta u_xx term is
// integrated exactly by the multiplier exp(-delta k^2 dt); the remaining
// tendency is advanced with Heun's method in the integrating-factor frame.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "spectral.hpp"

namespace arcflow {

enum class Model {
  Full,      // transport + nonlocal dissipation + delta u_xx
  HeatOnly,  // delta u_xx alone (control runs)
};

struct SolverConfig {
  double delta = 0.0;
  double t_end = 1.0;
  double cfl = 0.5;
  double dt_max = std::numeric_limits<double>::infinity();
  std::vector<double> snapshot_times;  // t = 0 and t_end are always recorded
  bool dealias = false;
  double pos_floor = kDefaultPosFloor;
  std::uint64_t seed = 0;
  Model model = Model::Full;
  std::size_t max_steps = 10'000'000;

  static constexpr double kDefaultPosFloor = 1e-10;

  void validate() const;
};

struct SolverState {
  double t = 0.0;
  RealField u;
  std::size_t step_count = 0;
  double last_dt = 0.0;
};

struct ScalarRecord {
  double t;
  double dt;
  double min_u;
  double max_u;
  double mass;
  double h12;  // homogeneous H^{1/2} seminorm
  double dissipation;
};

struct Snapshot {
  double t;
  RealField u;
};

struct Trajectory {
  double delta = 0.0;
  std::vector<Snapshot> snapshots;
  // scalars.front() describes the initial state (dt = 0); one record per
  // accepted step follows.
  std::vector<ScalarRecord> scalars;
};

RealField mollified_initial(const RealField& u0, double delta);

// Nonlinear part of the tendency as used by the time stepper.
RealField stepper_tendency(const RealField& u, const SolverConfig& cfg);

double stable_dt(const SolverState& state, const SolverConfig& cfg);

// One integrating-factor Heun step. Throws PositivityViolation when the new
// minimum is at or below cfg.pos_floor.
SolverState step(const SolverState& state, double dt, const SolverConfig& cfg);

ScalarRecord record(const SolverState& state, double delta);

Trajectory solve(const RealField& u0, const SolverConfig& cfg);

struct ContinuationMember {
  double delta;
  Trajectory trajectory;
  // Distances to the previous member, sup over the common snapshots.
  std::optional<double> distance_h12;
  std::optional<double> distance_l2;
};

// Runs solve once per delta (concurrently) on the snapshot grid of cfg.
std::vector<ContinuationMember> delta_continuation(const RealField& u0,
                                                   const std::vector<double>& deltas,
                                                   double t_end, const SolverConfig& cfg);

struct RoughSpec {
  double eta = 0.01;
  double c0 = 1.0;
  double amplitude = 0.5;  // sup norm of the fluctuation before offsetting
};

// Random-phase data with |c_k| ~ (1 + |k|)^{-1-eta}, rescaled to the given
// amplitude and shifted so that min u = c0.
RealField rough_initial(const PeriodicGrid& grid, const RoughSpec& spec, std::uint64_t seed);

}  // namespace arcflow
