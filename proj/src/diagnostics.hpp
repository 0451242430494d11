#pragma once

#include <vector>

#include "solver.hpp"
#include "spectral.hpp"

namespace arcflow {

// (2pi/n) sum u_j.
double mass(const RealField& u);

// Grid quadrature of u (Lu)^2 / (delta + u^2 + (Hu)^2).
double dissipation(const RealField& u, double delta);

struct EnergyBudget {
  double h12_sq_sup = 0.0;
  double dissipation_cum = 0.0;
  double initial_h12_sq = 0.0;
  // (h12_sq_sup + dissipation_cum) / initial_h12_sq; 0 when the initial
  // seminorm vanishes (constant data).
  double bound_ratio = 0.0;
  bool within_bound = true;
};

EnergyBudget energy_budget(const Trajectory& traj, double limit = 10.0);

struct ExtremumReport {
  double min_drift;  // min_t (min u(t) - min u(0)); should be >= -tol
  double max_drift;  // max_t (max u(t) - max u(0)); should be <= +tol
};

// Scans every scalar record and snapshot against the t = 0 state.
ExtremumReport extremum_report(const Trajectory& traj);

struct SmoothingReport {
  double s = 0.0;
  double eps0 = 0.0;
  double sup_weighted = 0.0;
  double sup_time = 0.0;  // where t^{s+eps0} |u|_{H^{1/2+s}} peaks
  double slope = 0.0;     // least-squares d log|u|_{H^{1/2+s}} / d log t
  std::size_t samples = 0;
  bool passes = false;    // slope >= -(s + eps0)(1 + slack)
};

SmoothingReport smoothing_fit(const Trajectory& traj, double s, double eps0, double t_min,
                              double slack = 0.25);

struct StabilityReport {
  std::vector<double> times;
  std::vector<double> distances;  // max_x |u1 - u2|
  double growth_factor = 0.0;     // smallest G with d(t) <= G d(0)
};

StabilityReport stability_compare(const Trajectory& a, const Trajectory& b);

}  // namespace arcflow
