#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "arcflow/arcflow.h"

namespace {

std::vector<double> samples(std::size_t n, double (*f)(double)) {
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(2 * std::numbers::pi * j / n);
  return v;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(arcf_version()) == "0.1.0");
  CHECK(std::string(arcf_status_name(ARCF_CONFIG)) == "configuration error");
}

TEST_CASE("field lifecycle and operators") {
  const auto v = samples(64, [](double x) { return std::cos(x); });
  arcf_field* f = nullptr;
  REQUIRE(arcf_field_create(v.data(), v.size(), &f) == ARCF_OK);
  CHECK(arcf_field_size(f) == 64);

  arcf_field* h = nullptr;
  REQUIRE(arcf_hilbert(f, &h) == ARCF_OK);
  for (std::size_t j = 0; j < 64; ++j)
    CHECK(std::abs(arcf_field_values(h)[j] - std::sin(2 * std::numbers::pi * j / 64)) < 1e-14);

  double norm = 0.0;
  CHECK(arcf_sobolev_seminorm(f, 0.5, &norm) == ARCF_OK);
  CHECK(norm == doctest::Approx(std::sqrt(std::numbers::pi)));

  arcf_field* k = nullptr;
  CHECK(arcf_frac_laplacian_kernel(f, 256, &k) == ARCF_OK);
  arcf_field_destroy(k);
  arcf_field_destroy(h);
  arcf_field_destroy(f);
}

TEST_CASE("errors set status and message") {
  std::vector<double> v(15, 1.0);
  arcf_field* f = reinterpret_cast<arcf_field*>(0x1);
  CHECK(arcf_field_create(v.data(), v.size(), &f) == ARCF_INVALID_ARGUMENT);
  CHECK(f == reinterpret_cast<arcf_field*>(0x1));
  CHECK(std::strlen(arcf_last_error()) > 0);
  CHECK(arcf_hilbert(nullptr, &f) == ARCF_INVALID_ARGUMENT);

  const auto z = samples(32, [](double x) { return std::cos(x); });
  arcf_field* zf = nullptr;
  REQUIRE(arcf_field_create(z.data(), z.size(), &zf) == ARCF_OK);
  arcf_field* t = nullptr;
  CHECK(arcf_tendency(zf, 0.0, 0, &t) == ARCF_POSITIVITY_VIOLATION);
  arcf_field_destroy(zf);
}

TEST_CASE("config and solve") {
  arcf_config* c = nullptr;
  REQUIRE(arcf_config_parse("[solver]\nt_end = 0.25\n", &c) == ARCF_OK);
  CHECK(arcf_config_set(c, "solver.delta", "-1") == ARCF_CONFIG);
  CHECK(std::string(arcf_last_error()).find("solver.delta") != std::string::npos);
  CHECK(arcf_config_set(c, "solver.snapshot_count", "2") == ARCF_OK);
  CHECK(arcf_config_validate(c) == ARCF_OK);
  CHECK(std::string(arcf_config_resolved(c)).find("t_end = 0.25") != std::string::npos);

  const auto v = samples(64, [](double x) { return 1.0 + 0.3 * std::cos(x); });
  arcf_field* u0 = nullptr;
  REQUIRE(arcf_field_create(v.data(), v.size(), &u0) == ARCF_OK);
  arcf_trajectory* tr = nullptr;
  REQUIRE(arcf_solve(c, u0, &tr) == ARCF_OK);
  CHECK(arcf_trajectory_snapshot_count(tr) == 3);
  CHECK(arcf_trajectory_snapshot_time(tr, 2) == 0.25);
  CHECK(arcf_trajectory_step_count(tr) > 0);

  arcf_extremum_report ex{};
  CHECK(arcf_extremum_of(tr, &ex) == ARCF_OK);
  CHECK(ex.min_drift >= -1e-8);
  arcf_energy_budget eb{};
  CHECK(arcf_energy_budget_of(tr, &eb) == ARCF_OK);
  CHECK(eb.bound_ratio <= 10.0);

  arcf_field* last = nullptr;
  CHECK(arcf_trajectory_snapshot(tr, 5, &last) == ARCF_INVALID_ARGUMENT);
  CHECK(arcf_trajectory_snapshot(tr, 2, &last) == ARCF_OK);
  arcf_field_destroy(last);

  const auto dir = std::filesystem::temp_directory_path() / "arcflow_capi";
  std::filesystem::create_directories(dir);
  CHECK(arcf_trajectory_write_csv(tr, (dir / "s.csv").c_str(), (dir / "d.csv").c_str()) ==
        ARCF_OK);
  CHECK(std::filesystem::exists(dir / "d.csv"));
  CHECK(arcf_trajectory_write_csv(tr, "/nonexistent/dir/s.csv", nullptr) == ARCF_IO);
  std::filesystem::remove_all(dir);

  arcf_trajectory_destroy(tr);
  arcf_field_destroy(u0);
  arcf_config_destroy(c);
}

TEST_CASE("root flow through the C interface") {
  const double roots[] = {-1.0, 0.0, 1.0};
  double out[3] = {0, 0, 0};
  REQUIRE(arcf_derivative_roots(roots, 3, out) == ARCF_OK);
  CHECK(std::abs(out[1] - 1 / std::sqrt(3.0)) < 1e-10);

  const double bad[] = {1.0, 0.0};
  CHECK(arcf_derivative_roots(bad, 2, out) != ARCF_OK);

  std::vector<double> r(10), o(10);
  for (int i = 0; i < 10; ++i) r[i] = i;
  std::size_t n = 0;
  REQUIRE(arcf_root_flow(r.data(), r.size(), 0.35, o.data(), &n) == ARCF_OK);
  CHECK(n == 7);
}

TEST_CASE("experiments through the C interface") {
  arcf_config* c = nullptr;
  REQUIRE(arcf_config_create(&c) == ARCF_OK);
  REQUIRE(arcf_config_set(c, "operators.n", "64") == ARCF_OK);
  REQUIRE(arcf_config_set(c, "operators.random_fields", "3") == ARCF_OK);
  const auto dir = std::filesystem::temp_directory_path() / "arcflow_capi_exp";
  arcf_report* r = nullptr;
  REQUIRE(arcf_run_experiment("check-operators", c, dir.c_str(), &r) == ARCF_OK);
  CHECK(arcf_report_exit_code(r) == 0);
  CHECK(std::string(arcf_report_summary(r)).find("RESULT PASS") != std::string::npos);
  arcf_report_destroy(r);
  CHECK(arcf_run_experiment("bogus", c, dir.c_str(), &r) == ARCF_INVALID_ARGUMENT);
  std::filesystem::remove_all(dir);
  arcf_config_destroy(c);
}
