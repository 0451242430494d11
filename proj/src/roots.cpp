#include "roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace arcflow {

namespace {

constexpr std::size_t kCompensatedThreshold = 10'000;

// Neumaier-compensated sum of 1/(x - r_i).
double compensated_log_derivative(std::span<const double> roots, double x) {
  double sum = 0.0, comp = 0.0;
  for (double r : roots) {
    const double term = 1.0 / (x - r);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double signed_log_derivative(std::span<const double> roots, double x) {
  if (roots.size() >= kCompensatedThreshold) return compensated_log_derivative(roots, x);
  double sum = 0.0;
  for (double r : roots) sum += 1.0 / (x - r);
  return sum;
}

double log_derivative_slope(std::span<const double> roots, double x) {
  double sum = 0.0;
  for (double r : roots) {
    const double d = x - r;
    sum -= 1.0 / (d * d);
  }
  return sum;
}

double abs_linear_integral(double d0, double d1, double len) {
  if ((d0 >= 0.0) == (d1 >= 0.0)) return 0.5 * len * (std::abs(d0) + std::abs(d1));
  const double a = std::abs(d0), b = std::abs(d1);
  return 0.5 * len * (a * a + b * b) / (a + b);
}

}  // namespace

RootEnsemble::RootEnsemble(std::vector<double> roots, std::size_t n0, std::size_t k)
    : roots_(std::move(roots)), n0_(n0), k_(k) {
  if (roots_.empty()) fail(ErrorCode::InvalidArgument, "root ensemble must be non-empty");
  if (n0_ < k_ || n0_ - k_ != roots_.size())
    fail(ErrorCode::InvalidArgument, "root ensemble length must equal n0 - k");
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    if (!std::isfinite(roots_[i])) fail(ErrorCode::NonFinite, "non-finite root");
    if (i > 0 && !(roots_[i] > roots_[i - 1]))
      fail(ErrorCode::InvalidArgument, "roots must be strictly increasing");
  }
}

RootEnsemble::RootEnsemble(std::vector<double> roots)
    : RootEnsemble(roots, roots.size(), 0) {}

TabulatedDensity::TabulatedDensity(std::vector<double> knots, std::vector<double> values)
    : x(std::move(knots)), w(std::move(values)) {
  if (x.size() < 2 || x.size() != w.size())
    fail(ErrorCode::InvalidArgument, "density needs >= 2 knots with matching values");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(w[i]))
      fail(ErrorCode::NonFinite, "density contains non-finite entries");
    if (w[i] < 0.0) fail(ErrorCode::InvalidArgument, "density must be nonnegative");
    if (i > 0 && !(x[i] > x[i - 1]))
      fail(ErrorCode::InvalidArgument, "density knots must be strictly increasing");
  }
}

TabulatedDensity TabulatedDensity::from_field(const RealField& u, double seam_tol) {
  const std::size_t n = u.size();
  const std::size_t half = n / 2;  // index of x = pi
  const double peak = linf_norm(u);
  if (!(peak > 0.0)) fail(ErrorCode::DegenerateInput, "density has zero mass");
  if (std::abs(u[half]) > seam_tol * peak)
    fail(ErrorCode::InvalidArgument, "density support touches the periodic seam");
  std::vector<double> x, w;
  x.reserve(n + 1);
  w.reserve(n + 1);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t j = half; j < n; ++j) {
    x.push_back(u.grid().point(j) - two_pi);
    w.push_back(std::max(0.0, u[j]));
  }
  for (std::size_t j = 0; j < half; ++j) {
    x.push_back(u.grid().point(j));
    w.push_back(std::max(0.0, u[j]));
  }
  x.push_back(std::numbers::pi);
  w.push_back(std::max(0.0, u[half]));
  return TabulatedDensity(std::move(x), std::move(w));
}

double TabulatedDensity::mass() const {
  double m = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) m += 0.5 * (x[i] - x[i - 1]) * (w[i] + w[i - 1]);
  return m;
}

TabulatedDensity basin_component(const TabulatedDensity& u, double center) {
  const auto it = std::lower_bound(u.x.begin(), u.x.end(), center);
  std::size_t c = static_cast<std::size_t>(it - u.x.begin());
  if (c == u.x.size()) --c;
  if (c > 0 && std::abs(u.x[c - 1] - center) < std::abs(u.x[c] - center)) --c;
  // Climb to the local maximum first, then descend on both sides.
  while (c + 1 < u.x.size() && u.w[c + 1] > u.w[c]) ++c;
  while (c > 0 && u.w[c - 1] > u.w[c]) --c;
  std::size_t lo = c, hi = c;
  while (lo > 0 && u.w[lo - 1] < u.w[lo]) --lo;
  while (hi + 1 < u.x.size() && u.w[hi + 1] < u.w[hi]) ++hi;
  if (hi == lo) fail(ErrorCode::DegenerateInput, "basin_component: flat density");
  return TabulatedDensity(std::vector<double>(u.x.begin() + lo, u.x.begin() + hi + 1),
                          std::vector<double>(u.w.begin() + lo, u.w.begin() + hi + 1));
}

RootEnsemble quantile_sample(const TabulatedDensity& u, std::size_t n) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "quantile_sample needs n >= 2");
  std::vector<double> cdf(u.x.size(), 0.0);
  for (std::size_t i = 1; i < u.x.size(); ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (u.x[i] - u.x[i - 1]) * (u.w[i] + u.w[i - 1]);
  const double total = cdf.back();
  if (!(total > 0.0)) fail(ErrorCode::DegenerateInput, "density has zero mass");

  std::vector<double> roots(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double q = (static_cast<double>(j) + 0.5) / static_cast<double>(n) * total;
    const auto it = std::lower_bound(cdf.begin() + 1, cdf.end(), q);
    const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    const double frac = (q - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
    roots[j] = u.x[i - 1] + frac * (u.x[i] - u.x[i - 1]);
  }
  return RootEnsemble(std::move(roots));
}

double log_derivative(std::span<const double> roots, double x) {
  return std::abs(signed_log_derivative(roots, x));
}

RootEnsemble derivative_roots(const RootEnsemble& e) {
  const auto r = e.roots();
  if (r.size() < 2) fail(ErrorCode::InvalidArgument, "derivative_roots needs >= 2 roots");
  std::vector<double> out(r.size() - 1);
  for (std::size_t j = 0; j + 1 < r.size(); ++j) {
    const double a = r[j], b = r[j + 1];
    const double width = b - a;
    if (width <= 1e-13 * std::max(1.0, std::abs(a)))
      fail(ErrorCode::DegenerateInput,
           "repeated root near " + std::to_string(a) + ": bisection bracket degenerates");

    // g decreases strictly from +inf to -inf across (a, b).
    double lo = a, hi = b;
    const double tol = 1e-12 * width;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (signed_log_derivative(r, mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) {
      const double g = signed_log_derivative(r, x);
      const double polished = x - g / log_derivative_slope(r, x);
      if (!(polished > a && polished < b)) break;
      x = polished;
    }
    out[j] = x;
  }
  return RootEnsemble(std::move(out), e.n0(), e.k() + 1);
}

RootEnsemble root_flow(const RootEnsemble& e, double t) {
  if (!(t >= 0.0 && t < 1.0)) fail(ErrorCode::InvalidArgument, "root_flow: t must lie in [0, 1)");
  // Guard against t * n0 landing a hair below an integer.
  const auto steps = static_cast<std::size_t>(
      std::floor(t * static_cast<double>(e.n0()) + 1e-9));
  if (steps + 1 > e.size())
    fail(ErrorCode::InvalidArgument, "root_flow: t too large for " + std::to_string(e.n0()) +
                                         " roots");
  RootEnsemble cur = e;
  for (std::size_t i = 0; i < steps; ++i) cur = derivative_roots(cur);
  return cur;
}

PiecewiseCdf PiecewiseCdf::from_points(std::span<const double> points, double weight) {
  PiecewiseCdf c;
  double acc = 0.0;
  for (double p : points) {
    c.x_.push_back(p);
    c.fl_.push_back(acc);
    acc += weight;
    c.fr_.push_back(acc);
  }
  return c;
}

PiecewiseCdf PiecewiseCdf::from_density(const TabulatedDensity& u, double scale) {
  PiecewiseCdf c;
  double acc = 0.0;
  for (std::size_t i = 0; i < u.x.size(); ++i) {
    if (i > 0) acc += 0.5 * (u.x[i] - u.x[i - 1]) * (u.w[i] + u.w[i - 1]) * scale;
    c.x_.push_back(u.x[i]);
    c.fl_.push_back(acc);
    c.fr_.push_back(acc);
  }
  return c;
}

double PiecewiseCdf::left(double z) const {
  if (z <= x_.front()) return 0.0;
  if (z > x_.back()) return fr_.back();
  const auto it = std::lower_bound(x_.begin(), x_.end(), z);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin());
  if (x_[i] == z) return fl_[i];
  const double frac = (z - x_[i - 1]) / (x_[i] - x_[i - 1]);
  return fr_[i - 1] + frac * (fl_[i] - fr_[i - 1]);
}

double PiecewiseCdf::right(double z) const {
  if (z < x_.front()) return 0.0;
  if (z >= x_.back()) return fr_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), z);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin());
  if (x_[i - 1] == z) return fr_[i - 1];
  const double frac = (z - x_[i - 1]) / (x_[i] - x_[i - 1]);
  return fr_[i - 1] + frac * (fl_[i] - fr_[i - 1]);
}

double wasserstein1(const PiecewiseCdf& a, const PiecewiseCdf& b) {
  std::vector<double> z(a.knots().begin(), a.knots().end());
  z.insert(z.end(), b.knots().begin(), b.knots().end());
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    const double d0 = a.right(z[i]) - b.right(z[i]);
    const double d1 = a.left(z[i + 1]) - b.left(z[i + 1]);
    total += abs_linear_integral(d0, d1, z[i + 1] - z[i]);
  }
  return total;
}

double wasserstein1(const RootEnsemble& e, const TabulatedDensity& u, bool normalize) {
  const double m = u.mass();
  if (!(m > 0.0)) fail(ErrorCode::DegenerateInput, "density has zero mass");
  const double point_weight =
      normalize ? 1.0 / static_cast<double>(e.size()) : 1.0 / static_cast<double>(e.n0());
  const double scale = normalize ? 1.0 / m : 1.0;
  return wasserstein1(PiecewiseCdf::from_points(e.roots(), point_weight),
                      PiecewiseCdf::from_density(u, scale));
}

}  // namespace arcflow
