#include "arcflow/arcflow.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv_io.hpp"
#include "diagnostics.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "roots.hpp"
#include "solver.hpp"

struct arcf_field {
  arcflow::RealField value;
};

struct arcf_config {
  arcflow::Config value;
  std::string resolved;
};

struct arcf_trajectory {
  arcflow::Trajectory value;
};

struct arcf_report {
  arcflow::Report value;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

arcf_status set_error(arcf_status s, const char* what) {
  g_last_error = what;
  return s;
}

// Runs fn, mapping exceptions onto status codes.
template <class Fn>
arcf_status guard(Fn&& fn) {
  try {
    fn();
    return ARCF_OK;
  } catch (const arcflow::Error& e) {
    return set_error(static_cast<arcf_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(ARCF_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(ARCF_INTERNAL, e.what());
  } catch (...) {
    return set_error(ARCF_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) arcflow::fail(arcflow::ErrorCode::InvalidArgument, what);
}

template <class Op>
arcf_status unary(const arcf_field* f, arcf_field** out, Op op) {
  return guard([&] {
    require(f && out, "null argument");
    *out = new arcf_field{op(f->value)};
  });
}

}  // namespace

extern "C" {

const char* arcf_version(void) { return "0.1.0"; }

const char* arcf_last_error(void) { return g_last_error.c_str(); }

const char* arcf_status_name(arcf_status status) {
  switch (status) {
    case ARCF_OK: return "ok";
    case ARCF_INVALID_ARGUMENT: return "invalid argument";
    case ARCF_GRID_MISMATCH: return "grid mismatch";
    case ARCF_NON_FINITE: return "non-finite value";
    case ARCF_POSITIVITY_VIOLATION: return "positivity violation";
    case ARCF_CONFIG: return "configuration error";
    case ARCF_IO: return "i/o error";
    case ARCF_FORMAT: return "format error";
    case ARCF_DEGENERATE_INPUT: return "degenerate input";
    case ARCF_INTERNAL: return "internal error";
  }
  return "unknown status";
}

arcf_status arcf_field_create(const double* values, size_t n, arcf_field** out) {
  return guard([&] {
    require(values && out, "null argument");
    arcflow::PeriodicGrid grid(n);
    *out = new arcf_field{arcflow::RealField(grid, std::vector<double>(values, values + n))};
  });
}

void arcf_field_destroy(arcf_field* f) { delete f; }

size_t arcf_field_size(const arcf_field* f) { return f ? f->value.grid().size() : 0; }

const double* arcf_field_values(const arcf_field* f) {
  return f ? f->value.values().data() : nullptr;
}

arcf_status arcf_hilbert(const arcf_field* f, arcf_field** out) {
  return unary(f, out, [](const arcflow::RealField& u) { return arcflow::hilbert(u); });
}

arcf_status arcf_frac_laplacian(const arcf_field* f, arcf_field** out) {
  return unary(f, out, [](const arcflow::RealField& u) { return arcflow::frac_laplacian(u); });
}

arcf_status arcf_derivative(const arcf_field* f, arcf_field** out) {
  return unary(f, out, [](const arcflow::RealField& u) { return arcflow::derivative(u); });
}

arcf_status arcf_heat(const arcf_field* f, double tau, arcf_field** out) {
  return unary(f, out,
               [tau](const arcflow::RealField& u) { return arcflow::heat_propagate(u, tau); });
}

arcf_status arcf_frac_laplacian_kernel(const arcf_field* f, size_t m, arcf_field** out) {
  return unary(f, out, [m](const arcflow::RealField& u) {
    return arcflow::frac_laplacian_kernel(u, m);
  });
}

arcf_status arcf_sobolev_seminorm(const arcf_field* f, double s, double* out) {
  return guard([&] {
    require(f && out, "null argument");
    *out = arcflow::sobolev_seminorm(f->value, s);
  });
}

arcf_status arcf_tendency(const arcf_field* u, double delta, int dealias, arcf_field** out) {
  return unary(u, out, [delta, dealias](const arcflow::RealField& v) {
    return arcflow::tendency_regularized(v, delta, dealias != 0);
  });
}

arcf_status arcf_config_create(arcf_config** out) {
  return guard([&] {
    require(out, "null argument");
    *out = new arcf_config{};
  });
}

arcf_status arcf_config_parse(const char* text, arcf_config** out) {
  return guard([&] {
    require(text && out, "null argument");
    *out = new arcf_config{arcflow::Config::parse(text), {}};
  });
}

void arcf_config_destroy(arcf_config* c) { delete c; }

arcf_status arcf_config_set(arcf_config* c, const char* key, const char* value) {
  return guard([&] {
    require(c && key && value, "null argument");
    c->value.set(key, value);
  });
}

arcf_status arcf_config_validate(const arcf_config* c) {
  return guard([&] {
    require(c, "null argument");
    c->value.validate();
  });
}

const char* arcf_config_resolved(arcf_config* c) {
  if (!c) return nullptr;
  c->resolved = c->value.resolved();
  return c->resolved.c_str();
}

arcf_status arcf_solve(const arcf_config* c, const arcf_field* u0, arcf_trajectory** out) {
  return guard([&] {
    require(c && u0 && out, "null argument");
    c->value.validate();
    *out = new arcf_trajectory{arcflow::solve(u0->value, c->value.solver())};
  });
}

void arcf_trajectory_destroy(arcf_trajectory* t) { delete t; }

size_t arcf_trajectory_snapshot_count(const arcf_trajectory* t) {
  return t ? t->value.snapshots.size() : 0;
}

double arcf_trajectory_snapshot_time(const arcf_trajectory* t, size_t i) {
  if (!t || i >= t->value.snapshots.size()) return std::nan("");
  return t->value.snapshots[i].t;
}

arcf_status arcf_trajectory_snapshot(const arcf_trajectory* t, size_t i, arcf_field** out) {
  return guard([&] {
    require(t && out, "null argument");
    require(i < t->value.snapshots.size(), "snapshot index out of range");
    *out = new arcf_field{t->value.snapshots[i].u};
  });
}

size_t arcf_trajectory_step_count(const arcf_trajectory* t) {
  return t ? t->value.scalars.size() - 1 : 0;
}

arcf_status arcf_trajectory_write_csv(const arcf_trajectory* t, const char* snapshots_path,
                                      const char* diagnostics_path) {
  return guard([&] {
    require(t, "null argument");
    if (snapshots_path) arcflow::write_snapshot_csv(t->value, snapshots_path);
    if (diagnostics_path) arcflow::write_diagnostics_csv(t->value, diagnostics_path);
  });
}

arcf_status arcf_energy_budget_of(const arcf_trajectory* t, arcf_energy_budget* out) {
  return guard([&] {
    require(t && out, "null argument");
    const auto b = arcflow::energy_budget(t->value);
    *out = {b.h12_sq_sup, b.dissipation_cum, b.initial_h12_sq, b.bound_ratio};
  });
}

arcf_status arcf_extremum_of(const arcf_trajectory* t, arcf_extremum_report* out) {
  return guard([&] {
    require(t && out, "null argument");
    const auto r = arcflow::extremum_report(t->value);
    *out = {r.min_drift, r.max_drift};
  });
}

arcf_status arcf_derivative_roots(const double* roots, size_t n, double* out) {
  return guard([&] {
    require(roots && out, "null argument");
    const auto d =
        arcflow::derivative_roots(arcflow::RootEnsemble(std::vector<double>(roots, roots + n)));
    std::copy(d.roots().begin(), d.roots().end(), out);
  });
}

arcf_status arcf_root_flow(const double* roots, size_t n, double t, double* out, size_t* out_n) {
  return guard([&] {
    require(roots && out && out_n, "null argument");
    const auto d = arcflow::root_flow(
        arcflow::RootEnsemble(std::vector<double>(roots, roots + n)), t);
    std::copy(d.roots().begin(), d.roots().end(), out);
    *out_n = d.size();
  });
}

arcf_status arcf_run_experiment(const char* command, const arcf_config* c, const char* out_dir,
                                arcf_report** out) {
  return guard([&] {
    require(command && c && out_dir && out, "null argument");
    auto rep = arcflow::run_experiment(command, c->value, out_dir);
    auto summary = rep.summary();
    *out = new arcf_report{std::move(rep), std::move(summary)};
  });
}

void arcf_report_destroy(arcf_report* r) { delete r; }

int arcf_report_exit_code(const arcf_report* r) { return r ? r->value.exit_code() : -1; }

const char* arcf_report_summary(const arcf_report* r) {
  return r ? r->summary.c_str() : nullptr;
}

}  // extern "C"
