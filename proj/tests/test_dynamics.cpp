#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dynamics.hpp"
#include "error.hpp"
#include "test_support.hpp"

using namespace arcflow;
using arcflow::testing::max_diff;
using arcflow::testing::mode;
using arcflow::testing::positive_field;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("coefficients at constants") {
  const PeriodicGrid g(32);
  const Coefficients one = coefficients(RealField::constant(g, 1.0), 0.0);
  CHECK(one.gamma.min() == doctest::Approx(1 / kPi));
  CHECK(one.gamma.max() == doctest::Approx(1 / kPi));
  CHECK(linf_norm(one.velocity) == 0.0);
  CHECK(one.rho.min() == doctest::Approx(1.0));

  const Coefficients two = coefficients(RealField::constant(g, 2.0), 0.0);
  CHECK(two.gamma.max() == doctest::Approx(1 / (2 * kPi)));
  CHECK(two.rho.max() == doctest::Approx(2.0));
}

TEST_CASE("coefficients at a point with u = Hu = 1") {
  // u = 2 - cos x - sin x has Hu = cos x - sin x; both equal 1 at x = 0.
  const PeriodicGrid g(64);
  const RealField u = RealField::constant(g, 2.0) - mode(g, 1) - mode(g, 1, true);
  const Coefficients c = coefficients(u, 0.0);
  CHECK(hilbert(u)[0] == doctest::Approx(1.0));
  CHECK(c.gamma[0] == doctest::Approx(1 / (2 * kPi)));
  CHECK(c.velocity[0] == doctest::Approx(-1 / (2 * kPi)));
  CHECK(c.rho[0] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("constants are steady") {
  const PeriodicGrid g(64);
  for (double delta : {0.0, 1e-2}) {
    CHECK(linf_norm(tendency_regularized(RealField::constant(g, 1.3), delta)) == 0.0);
  }
  CHECK(linf_norm(tendency_flux(RealField::constant(g, 1.3))) == 0.0);
}

TEST_CASE("flux and quasilinear forms agree") {
  const PeriodicGrid g(256);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RealField u = positive_field(g, seed, 0.5);
    CHECK(max_diff(tendency_flux(u), tendency_regularized(u, 0.0)) <= 1e-10);
    CHECK(std::abs(tendency_flux(u).mean()) <= 1e-14);
  }
}

TEST_CASE("linearization about u = 1") {
  const PeriodicGrid g(128);
  const double eps = 1e-4;
  const RealField u = RealField::constant(g, 1.0) + eps * mode(g, 1);
  const RealField expected = (-eps / kPi) * mode(g, 1);
  CHECK(max_diff(tendency_regularized(u, 0.0), expected) <= 2 * eps * eps);
}

TEST_CASE("regularized tendency matches a difference quotient of the flux") {
  // At delta = 0 the tendency is -(1/pi) d/dx arctan(Hu/u); compare against
  // a centred difference of the arctangent evaluated off-grid.
  const PeriodicGrid g(256);
  const RealField u = positive_field(g, 77, 0.8, 4);
  const RealField hu = hilbert(u);
  const SpectralField U = forward(u);
  const SpectralField HU = forward(hu);
  const RealField t = tendency_regularized(u, 0.0);
  const double h = 1e-5;
  for (std::size_t j = 0; j < g.size(); j += 23) {
    const double x = g.point(j);
    const auto theta = [&](double y) { return std::atan(evaluate(HU, y) / evaluate(U, y)); };
    const double fd = -(theta(x + h) - theta(x - h)) / (2 * h) / kPi;
    CHECK(t[j] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("dealiased tendency is close for resolved fields") {
  const PeriodicGrid g(256);
  const RealField u = positive_field(g, 4, 0.7, 5);
  CHECK(max_diff(nonlinear_tendency(u, 0.0, true), nonlinear_tendency(u, 0.0, false)) < 1e-10);
}

TEST_CASE("positivity guard") {
  const PeriodicGrid g(32);
  const RealField u = mode(g, 1);
  CHECK_THROWS_AS(tendency_regularized(u, 0.0), Error);
  try {
    require_admissible(RealField::constant(g, 0.0), 0.0);
    FAIL("expected a positivity error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PositivityViolation);
  }
  CHECK_NOTHROW(require_admissible(u, 1e-3));
}

TEST_CASE("reflection symmetry") {
  // u(-x) evolves as the reflection of u(x).
  const PeriodicGrid g(128);
  const RealField u = positive_field(g, 12, 0.6);
  std::vector<double> refl(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) refl[j] = u[(g.size() - j) % g.size()];
  const RealField t = tendency_regularized(u, 1e-3);
  const RealField tr = tendency_regularized(RealField(g, refl), 1e-3);
  for (std::size_t j = 0; j < g.size(); ++j)
    CHECK(std::abs(tr[j] - t[(g.size() - j) % g.size()]) < 1e-12);
}
