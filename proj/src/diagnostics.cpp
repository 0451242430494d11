#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dynamics.hpp"
#include "error.hpp"

namespace arcflow {

double mass(const RealField& u) {
  double sum = 0.0;
  for (double v : u.values()) sum += v;
  return u.grid().dx() * sum;
}

double dissipation(const RealField& u, double delta) {
  require_admissible(u, delta);
  const RealField hu = hilbert(u);
  const RealField lu = frac_laplacian(u);
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    sum += u[j] * lu[j] * lu[j] / (delta + u[j] * u[j] + hu[j] * hu[j]);
  return u.grid().dx() * sum;
}

EnergyBudget energy_budget(const Trajectory& traj, double limit) {
  if (traj.snapshots.empty() || traj.scalars.empty())
    fail(ErrorCode::DegenerateInput, "energy_budget: empty trajectory");

  EnergyBudget b;
  const double h0 = sobolev_seminorm(traj.snapshots.front().u, 0.5);
  b.initial_h12_sq = h0 * h0;
  for (const auto& s : traj.snapshots) {
    const double h = sobolev_seminorm(s.u, 0.5);
    b.h12_sq_sup = std::max(b.h12_sq_sup, h * h);
  }
  for (const auto& r : traj.scalars) b.h12_sq_sup = std::max(b.h12_sq_sup, r.h12 * r.h12);

  // Trapezoid in t over the per-step records.
  for (std::size_t i = 1; i < traj.scalars.size(); ++i) {
    const auto& a = traj.scalars[i - 1];
    const auto& c = traj.scalars[i];
    b.dissipation_cum += 0.5 * (c.t - a.t) * (a.dissipation + c.dissipation);
  }

  if (b.initial_h12_sq > 0.0)
    b.bound_ratio = (b.h12_sq_sup + b.dissipation_cum) / b.initial_h12_sq;
  b.within_bound = std::isfinite(b.bound_ratio) && b.bound_ratio <= limit;
  return b;
}

ExtremumReport extremum_report(const Trajectory& traj) {
  if (traj.scalars.empty()) fail(ErrorCode::DegenerateInput, "extremum_report: no records");
  const double min0 = traj.scalars.front().min_u;
  const double max0 = traj.scalars.front().max_u;
  ExtremumReport rep{0.0, 0.0};
  for (const auto& r : traj.scalars) {
    rep.min_drift = std::min(rep.min_drift, r.min_u - min0);
    rep.max_drift = std::max(rep.max_drift, r.max_u - max0);
  }
  for (const auto& s : traj.snapshots) {
    rep.min_drift = std::min(rep.min_drift, s.u.min() - min0);
    rep.max_drift = std::max(rep.max_drift, s.u.max() - max0);
  }
  return rep;
}

SmoothingReport smoothing_fit(const Trajectory& traj, double s, double eps0, double t_min,
                              double slack) {
  if (!(t_min > 0.0)) fail(ErrorCode::InvalidArgument, "smoothing_fit: t_min must be > 0");
  SmoothingReport rep;
  rep.s = s;
  rep.eps0 = eps0;

  std::vector<double> lx, ly;
  for (const auto& snap : traj.snapshots) {
    if (snap.t < t_min) continue;
    const double norm = sobolev_seminorm(snap.u, 0.5 + s);
    if (!(norm > 0.0)) continue;
    const double weighted = std::pow(snap.t, s + eps0) * norm;
    if (weighted > rep.sup_weighted) {
      rep.sup_weighted = weighted;
      rep.sup_time = snap.t;
    }
    lx.push_back(std::log(snap.t));
    ly.push_back(std::log(norm));
  }
  rep.samples = lx.size();
  if (lx.size() < 3)
    fail(ErrorCode::DegenerateInput,
         "smoothing_fit: need >= 3 usable snapshots, have " + std::to_string(lx.size()));

  const double m = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  rep.slope = sxy / sxx;
  rep.passes = std::isfinite(rep.sup_weighted) && rep.slope >= -(s + eps0) * (1.0 + slack);
  return rep;
}

StabilityReport stability_compare(const Trajectory& a, const Trajectory& b) {
  if (a.snapshots.size() != b.snapshots.size() || a.snapshots.empty())
    fail(ErrorCode::GridMismatch, "stability_compare: snapshot counts differ");
  StabilityReport rep;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    const auto& sa = a.snapshots[i];
    const auto& sb = b.snapshots[i];
    if (std::abs(sa.t - sb.t) > 1e-12 * std::max(1.0, std::abs(sa.t)))
      fail(ErrorCode::GridMismatch, "stability_compare: snapshot times differ");
    rep.times.push_back(sa.t);
    rep.distances.push_back(linf_norm(sa.u - sb.u));
  }
  const double d0 = rep.distances.front();
  const double dmax = *std::max_element(rep.distances.begin(), rep.distances.end());
  if (d0 > 0.0)
    rep.growth_factor = dmax / d0;
  else
    rep.growth_factor = dmax > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return rep;
}

}  // namespace arcflow
