#include <doctest.h>

#include <cmath>
#include <numbers>

#include "error.hpp"
#include "solver.hpp"
#include "test_support.hpp"

using namespace arcflow;
using arcflow::testing::max_diff;
using arcflow::testing::mode;
using arcflow::testing::positive_field;

namespace {

const double kPi = std::numbers::pi;

double mode1_amplitude(const RealField& u) { return 2.0 * std::abs(forward(u)(1)); }

SolverConfig fixed_dt(double dt, double t_end, double delta = 0.0) {
  SolverConfig c;
  c.cfl = 1.0;
  c.dt_max = dt;
  c.t_end = t_end;
  c.delta = delta;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  SolverConfig c;
  c.cfl = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SolverConfig{};
  c.delta = -1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SolverConfig{};
  c.snapshot_times = {0.5, 2.0};
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("mollified initial data") {
  const PeriodicGrid g(64);
  const RealField u0 = RealField::constant(g, 1.0) + 0.5 * mode(g, 1);
  CHECK(max_diff(mollified_initial(u0, 0.0), u0) == 0.0);
  CHECK(max_diff(mollified_initial(RealField::constant(g, 2.0), 0.3), RealField::constant(g, 2.0)) <
        1e-15);
  const RealField want = RealField::constant(g, 1.0) + (0.5 * std::exp(-0.1)) * mode(g, 1);
  CHECK(max_diff(mollified_initial(u0, 0.1), want) < 1e-15);
}

TEST_CASE("stable time step") {
  SolverConfig c;
  c.cfl = 1.0;
  c.t_end = 10.0;
  const SolverState s{0.0, RealField::constant(PeriodicGrid(256), 1.0), 0, 0.0};
  CHECK(stable_dt(s, c) == doctest::Approx(kPi / 128).epsilon(1e-14));

  const SolverState s2{0.0, RealField::constant(PeriodicGrid(512), 1.0), 0, 0.0};
  CHECK(stable_dt(s2, c) == doctest::Approx(stable_dt(s, c) / 2).epsilon(1e-14));

  // Lands exactly on the next snapshot.
  c.snapshot_times = {1e-3};
  CHECK(stable_dt(s, c) == 1e-3);
}

TEST_CASE("constant data is a fixed point") {
  const PeriodicGrid g(64);
  for (double delta : {0.0, 1e-2}) {
    SolverConfig c;
    c.delta = delta;
    SolverState s{0.0, RealField::constant(g, 1.5), 0, 0.0};
    for (int i = 0; i < 20; ++i) s = step(s, 0.01, c);
    CHECK(max_diff(s.u, RealField::constant(g, 1.5)) < 1e-14);
  }
}

TEST_CASE("one step reproduces the linearized decay") {
  const PeriodicGrid g(64);
  const double eps = 1e-5;
  const RealField u = RealField::constant(g, 1.0) + eps * mode(g, 1);
  SolverConfig c;
  for (double dt : {0.02, 0.01}) {
    const SolverState s = step({0.0, u, 0, 0.0}, dt, c);
    const double ratio = mode1_amplitude(s.u) / eps;
    CHECK(std::abs(ratio - std::exp(-dt / kPi)) < dt * dt * dt + 1e-4 * eps);
  }
}

TEST_CASE("second-order self convergence") {
  const PeriodicGrid g(64);
  const RealField u0 = RealField::constant(g, 1.0) + 0.3 * mode(g, 1);
  const double t_end = 0.4;
  const auto run = [&](double dt) { return solve(u0, fixed_dt(dt, t_end)).snapshots.back().u; };
  const RealField ref = run(0.0025);
  const double e1 = max_diff(run(0.02), ref);
  const double e2 = max_diff(run(0.01), ref);
  const double ratio = e1 / e2;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("zero horizon returns the mollified datum") {
  const PeriodicGrid g(64);
  const RealField u0 = positive_field(g, 1, 0.5);
  SolverConfig c;
  c.t_end = 0.0;
  c.delta = 0.05;
  const Trajectory tr = solve(u0, c);
  REQUIRE(tr.snapshots.size() == 1);
  CHECK(max_diff(tr.snapshots[0].u, mollified_initial(u0, 0.05)) == 0.0);
}

TEST_CASE("snapshots land on requested times") {
  const PeriodicGrid g(64);
  SolverConfig c;
  c.t_end = 0.5;
  c.snapshot_times = {0.1, 0.25};
  const Trajectory tr = solve(positive_field(g, 2, 0.5), c);
  REQUIRE(tr.snapshots.size() == 4);
  CHECK(tr.snapshots[0].t == 0.0);
  CHECK(tr.snapshots[1].t == 0.1);
  CHECK(tr.snapshots[2].t == 0.25);
  CHECK(tr.snapshots[3].t == 0.5);
  CHECK(tr.scalars.front().dt == 0.0);
  CHECK(tr.scalars.back().t == 0.5);
}

TEST_CASE("maximum principle on random positive data") {
  const PeriodicGrid g(128);
  for (double delta : {0.0, 1e-3}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const RealField u0 = positive_field(g, seed, 0.3, 10);
      SolverConfig c;
      c.delta = delta;
      c.t_end = 0.5;
      const Trajectory tr = solve(u0, c);
      for (const auto& r : tr.scalars) {
        CHECK(r.min_u >= u0.min() - 1e-8);
        CHECK(r.max_u <= u0.max() + 1e-8);
      }
    }
  }
}

TEST_CASE("positivity violations abort") {
  const PeriodicGrid g(64);
  SolverConfig c;
  c.pos_floor = 0.55;  // above the datum minimum
  const RealField u0 = RealField::constant(g, 0.6) + 0.1 * mode(g, 3);
  try {
    solve(u0, c);
    FAIL("expected a positivity error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PositivityViolation);
  }
}

TEST_CASE("heat-only model") {
  const PeriodicGrid g(64);
  SolverConfig c;
  c.model = Model::HeatOnly;
  c.delta = 0.1;
  c.t_end = 0.5;
  const RealField u0 = RealField::constant(g, 1.0) + 0.5 * mode(g, 2);
  const Trajectory tr = solve(u0, c);
  // Mollification at t = 0 plus exact heat flow to t_end.
  CHECK(max_diff(tr.snapshots.back().u, heat_propagate(u0, 0.1 * 1.5)) < 1e-13);
}

TEST_CASE("delta continuation") {
  const PeriodicGrid g(64);
  SolverConfig c;
  c.snapshot_times = {0.25, 0.5, 0.75};
  const RealField u0 = RealField::constant(g, 1.0) + 0.3 * mode(g, 1);

  const auto single = delta_continuation(u0, {1e-2}, 1.0, c);
  REQUIRE(single.size() == 1);
  CHECK_FALSE(single[0].distance_h12.has_value());

  const auto m = delta_continuation(u0, {1e-2, 5e-3, 2.5e-3}, 1.0, c);
  REQUIRE(m.size() == 3);
  CHECK(*m[2].distance_h12 < *m[1].distance_h12);
  CHECK(*m[2].distance_l2 < *m[1].distance_l2);

  const auto flat = delta_continuation(RealField::constant(g, 2.0), {1e-2, 5e-3}, 1.0, c);
  CHECK(*flat[1].distance_h12 == 0.0);
}

TEST_CASE("rough initial data") {
  const PeriodicGrid g(256);
  RoughSpec spec;
  const RealField a = rough_initial(g, spec, 3);
  const RealField b = rough_initial(g, spec, 3);
  const RealField c = rough_initial(g, spec, 4);
  CHECK(max_diff(a, b) == 0.0);
  CHECK(max_diff(a, c) > 0.0);
  CHECK(a.min() == doctest::Approx(spec.c0).epsilon(1e-14));
  CHECK(linf_norm(a - RealField::constant(g, a.mean())) > 0.0);
  // Coefficient magnitudes follow the prescribed decay before rescaling.
  const SpectralField A = forward(a);
  const double r = std::abs(A(40)) / std::abs(A(10));
  CHECK(r == doctest::Approx(std::pow(11.0 / 41.0, 1.0 + spec.eta)).epsilon(1e-10));
}
