#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"
#include "roots.hpp"
#include "test_support.hpp"

using namespace arcflow;

namespace {

RootEnsemble random_ensemble(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> r(n);
  for (auto& x : r) x = u(rng);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return RootEnsemble(r);
}

TabulatedDensity uniform(double a, double b, std::size_t knots = 2) {
  std::vector<double> x, w;
  for (std::size_t i = 0; i < knots; ++i) {
    x.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(knots - 1));
    w.push_back(1.0 / (b - a));
  }
  return TabulatedDensity(x, w);
}

// Brute-force W1: Riemann sum of |F - G| on a fine grid.
double brute_w1(const PiecewiseCdf& a, const PiecewiseCdf& b, double lo, double hi) {
  const std::size_t m = 400000;
  const double h = (hi - lo) / m;
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double z = lo + (i + 0.5) * h;
    s += std::abs(a.right(z) - b.right(z)) * h;
  }
  return s;
}

}  // namespace

TEST_CASE("ensemble validation") {
  CHECK_THROWS_AS(RootEnsemble({1.0, 0.0}), Error);
  CHECK_THROWS_AS(RootEnsemble({0.0, 0.0}), Error);
  CHECK_THROWS_AS(RootEnsemble({0.0, std::nan("")}), Error);
  CHECK_THROWS_AS(RootEnsemble({0.0, 1.0}, 5, 1), Error);
}

TEST_CASE("derivative roots closed forms") {
  const RootEnsemble d = derivative_roots(RootEnsemble({-1.0, 0.0, 1.0}));
  REQUIRE(d.size() == 2);
  CHECK(std::abs(d.roots()[0] + 1 / std::sqrt(3.0)) < 1e-10);
  CHECK(std::abs(d.roots()[1] - 1 / std::sqrt(3.0)) < 1e-10);
  CHECK(d.k() == 1);
  CHECK(d.n0() == 3);

  const RootEnsemble s = derivative_roots(RootEnsemble({-2.5, 2.5}));
  REQUIRE(s.size() == 1);
  CHECK(std::abs(s.roots()[0]) < 1e-12);

  // p = x(x - 1)(x - 3): p' = 3x^2 - 8x + 3.
  const RootEnsemble q = derivative_roots(RootEnsemble({0.0, 1.0, 3.0}));
  CHECK(std::abs(q.roots()[0] - (4 - std::sqrt(7.0)) / 3) < 1e-12);
  CHECK(std::abs(q.roots()[1] - (4 + std::sqrt(7.0)) / 3) < 1e-12);
}

TEST_CASE("interlacing on random ensembles") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const RootEnsemble e = random_ensemble(rng, 2 + trial % 40);
    const RootEnsemble d = derivative_roots(e);
    REQUIRE(d.size() + 1 == e.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(d.roots()[i] > e.roots()[i]);
      CHECK(d.roots()[i] < e.roots()[i + 1]);
      const double scale = 1.0 / (e.roots()[i + 1] - e.roots()[i]);
      CHECK(log_derivative(e.roots(), d.roots()[i]) <= 1e-9 * scale * e.size());
    }
  }
}

TEST_CASE("translation and reflection equivariance") {
  std::mt19937_64 rng(7);
  const RootEnsemble e = random_ensemble(rng, 25);
  const RootEnsemble d = derivative_roots(e);
  std::vector<double> shifted, mirrored;
  for (double r : e.roots()) shifted.push_back(r + 3.25);
  for (auto it = e.roots().rbegin(); it != e.roots().rend(); ++it) mirrored.push_back(-*it);
  const RootEnsemble ds = derivative_roots(RootEnsemble(shifted));
  const RootEnsemble dm = derivative_roots(RootEnsemble(mirrored));
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(std::abs(ds.roots()[i] - d.roots()[i] - 3.25) < 1e-9);
    CHECK(std::abs(dm.roots()[d.size() - 1 - i] + d.roots()[i]) < 1e-9);
  }
}

TEST_CASE("root flow") {
  std::vector<double> r;
  for (int i = 0; i < 10; ++i) r.push_back(i * 0.5);
  const RootEnsemble e(r);
  const RootEnsemble same = root_flow(e, 0.0);
  CHECK(std::equal(same.roots().begin(), same.roots().end(), e.roots().begin()));
  const RootEnsemble f = root_flow(e, 0.35);
  CHECK(f.size() == 7);
  CHECK(f.k() == 3);
  CHECK_THROWS_AS(root_flow(e, 1.0), Error);

  std::mt19937_64 rng(99);
  RootEnsemble cur = random_ensemble(rng, 30);
  while (cur.size() > 1) {
    const RootEnsemble next = derivative_roots(cur);
    CHECK(next.span_width() <= cur.span_width());
    cur = next;
  }
}

TEST_CASE("derivative roots match polynomial coefficients") {
  // Expand p, differentiate, and verify p'(root) ~ 0 relative to |p'| scale.
  const std::vector<double> r = {-1.7, -0.4, 0.3, 1.1, 2.9};
  const RootEnsemble d = derivative_roots(RootEnsemble(r));
  std::vector<double> c = {1.0};
  for (double x0 : r) {
    std::vector<double> n(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      n[i + 1] += c[i];
      n[i] -= x0 * c[i];
    }
    c = n;
  }
  for (double z : d.roots()) {
    double v = 0.0, scale = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) {
      v += static_cast<double>(i) * c[i] * std::pow(z, static_cast<double>(i - 1));
      scale += std::abs(static_cast<double>(i) * c[i] * std::pow(z, static_cast<double>(i - 1)));
    }
    CHECK(std::abs(v) < 1e-12 * scale);
  }
}

TEST_CASE("quantile sampling") {
  const RootEnsemble u4 = quantile_sample(uniform(-1.0, 1.0), 4);
  const std::vector<double> want = {-0.75, -0.25, 0.25, 0.75};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(u4.roots()[i] - want[i]) < 1e-14);

  const TabulatedDensity tent({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
  const RootEnsemble sym = quantile_sample(tent, 2);
  CHECK(std::abs(sym.roots()[0] + sym.roots()[1]) < 1e-14);

  // Triangular density 2x on [0, 1]: F(x) = x^2.
  std::vector<double> x, w;
  for (int i = 0; i <= 1000; ++i) {
    x.push_back(i / 1000.0);
    w.push_back(2.0 * i / 1000.0);
  }
  const std::size_t n = 500;
  const RootEnsemble tri = quantile_sample(TabulatedDensity(x, w), n);
  double sup = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double z = tri.roots()[j];
    sup = std::max({sup, std::abs(static_cast<double>(j) / n - z * z),
                    std::abs(static_cast<double>(j + 1) / n - z * z)});
  }
  CHECK(sup <= 2.0 / n);
}

TEST_CASE("density from a periodic field") {
  const PeriodicGrid g(256);
  const RealField bump = RealField::sample(g, [](double x) { return unit_bump(x, 1.5); });
  const TabulatedDensity d = TabulatedDensity::from_field(bump);
  CHECK(d.x.size() == 257);
  CHECK(d.x.front() == doctest::Approx(-std::numbers::pi));
  CHECK(d.mass() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(TabulatedDensity::from_field(RealField::constant(g, 1.0)), Error);
}

TEST_CASE("basin component stops at the enclosing minima") {
  std::vector<double> x, w;
  for (int i = 0; i <= 60; ++i) {
    const double z = -3.0 + 0.1 * i;
    x.push_back(z);
    w.push_back(0.1 + std::exp(-4 * z * z) + 0.5 * std::exp(-4 * (z - 2.2) * (z - 2.2)));
  }
  const TabulatedDensity c = basin_component(TabulatedDensity(x, w), 0.3);
  CHECK(c.x.front() == doctest::Approx(-3.0));
  CHECK(c.x.back() > 0.5);
  CHECK(c.x.back() < 2.0);
}

TEST_CASE("wasserstein distance") {
  const std::vector<double> pts = {0.1, 0.4, 0.45, 0.9};
  const PiecewiseCdf a = PiecewiseCdf::from_points(pts, 0.25);
  CHECK(wasserstein1(a, a) == 0.0);

  const double h = 0.3;
  const PiecewiseCdf u0 = PiecewiseCdf::from_density(uniform(0.0, 1.0), 1.0);
  const PiecewiseCdf uh = PiecewiseCdf::from_density(uniform(h, 1.0 + h), 1.0);
  CHECK(wasserstein1(u0, uh) == doctest::Approx(h).epsilon(1e-14));

  // Exact merge-integration against a brute-force Riemann sum.
  const TabulatedDensity tent({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
  const PiecewiseCdf t = PiecewiseCdf::from_density(tent, 1.0);
  const PiecewiseCdf p = PiecewiseCdf::from_points(std::vector<double>{-0.5, -0.1, 0.2, 0.7}, 0.25);
  CHECK(wasserstein1(t, p) == doctest::Approx(brute_w1(t, p, -1.0, 1.0)).epsilon(1e-6));

  // Quantile discretization bound.
  for (std::size_t n : {10u, 40u, 160u}) {
    const RootEnsemble q = quantile_sample(tent, n);
    CHECK(wasserstein1(q, tent) <= 2.0 * 2.0 / static_cast<double>(n));
  }
}
