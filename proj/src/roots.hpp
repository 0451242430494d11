#pragma once

// Real roots of real-rooted polynomials under repeated differentiation, and
// the distributional comparison against densities.

#include <cstddef>
#include <span>
#include <vector>

#include "spectral.hpp"

namespace arcflow {

class RootEnsemble {
 public:
  // Roots must be finite and strictly increasing; n0 - k == roots.size().
  RootEnsemble(std::vector<double> roots, std::size_t n0, std::size_t k);
  explicit RootEnsemble(std::vector<double> roots);

  std::span<const double> roots() const noexcept { return roots_; }
  std::size_t size() const noexcept { return roots_.size(); }
  std::size_t n0() const noexcept { return n0_; }
  std::size_t k() const noexcept { return k_; }
  double span_width() const { return roots_.back() - roots_.front(); }

 private:
  std::vector<double> roots_;
  std::size_t n0_;
  std::size_t k_;
};

// Nonnegative density tabulated at strictly increasing knots, linear between.
struct TabulatedDensity {
  std::vector<double> x;
  std::vector<double> w;

  TabulatedDensity(std::vector<double> knots, std::vector<double> values);

  // Unrolls a periodic field onto [-pi, pi] (n + 1 knots). Fails when the
  // field is not numerically zero at the seam x = +-pi, relative to its max.
  static TabulatedDensity from_field(const RealField& u, double seam_tol = 1e-12);

  double mass() const;
};

// Restriction of u to the basin around `center`: knots are added outward
// while u keeps decreasing, so the piece stops at the enclosing minima.
TabulatedDensity basin_component(const TabulatedDensity& u, double center);

// Roots at F^{-1}((j - 1/2)/n), j = 1..n, with F the trapezoid CDF of u
// interpolated linearly between knots.
RootEnsemble quantile_sample(const TabulatedDensity& u, std::size_t n);

// Roots of p' for p(x) = prod (x - x_j): one per gap, found by bisection of
// sum_i 1/(x - x_i) followed by bracketed Newton polishing.
RootEnsemble derivative_roots(const RootEnsemble& e);

// Applies derivative_roots floor(t n0) times.
RootEnsemble root_flow(const RootEnsemble& e, double t);

// |sum_i 1/(x - x_i)|, exposed for residual checks.
double log_derivative(std::span<const double> roots, double x);

// Cumulative distribution that is linear between knots and may jump at them.
class PiecewiseCdf {
 public:
  static PiecewiseCdf from_points(std::span<const double> points, double weight);
  static PiecewiseCdf from_density(const TabulatedDensity& u, double scale);

  double left(double z) const;   // F(z-)
  double right(double z) const;  // F(z+)
  std::span<const double> knots() const noexcept { return x_; }
  double total() const noexcept { return fr_.back(); }

 private:
  std::vector<double> x_, fl_, fr_;
};

// Integral of |F - G| over the union of their knot ranges.
double wasserstein1(const PiecewiseCdf& a, const PiecewiseCdf& b);

// With normalize set both measures are scaled to probability; otherwise each
// root carries 1/n0 and the density keeps its own mass.
double wasserstein1(const RootEnsemble& e, const TabulatedDensity& u, bool normalize = true);

}  // namespace arcflow
