#include "dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace arcflow {

namespace {

using Complex = std::complex<double>;

// Spectral pieces shared by every right-hand side: Hu, Lu, u_x.
struct Derived {
  RealField hu;
  RealField lu;
  RealField ux;
};

Derived derive(const SpectralField& U) {
  const long nyq = static_cast<long>(U.grid().kmax());
  auto hu = apply_multiplier(U, [nyq](long k) -> Complex {
    if (k == 0 || k == nyq) return 0.0;
    return {0.0, -1.0};
  });
  auto lu = apply_multiplier(U, [](long k) -> Complex { return static_cast<double>(k); });
  auto ux = apply_multiplier(U, [nyq](long k) -> Complex {
    if (k == nyq) return 0.0;
    return {0.0, static_cast<double>(k)};
  });
  return {inverse(hu), inverse(lu), inverse(ux)};
}

std::size_t padded_size(std::size_t n) {
  std::size_t m = (3 * n + 1) / 2;
  return m % 2 == 0 ? m : m + 1;
}

SpectralField pad(const SpectralField& F, std::size_t m) {
  const auto c = F.coeffs();
  const std::size_t nyq = c.size() - 1;
  std::vector<Complex> out(m / 2 + 1, Complex{});
  for (std::size_t k = 0; k < nyq; ++k) out[k] = c[k];
  // c_N cos(Nx) splits evenly between +N and -N once N is no longer Nyquist.
  out[nyq] = 0.5 * c[nyq];
  return SpectralField(PeriodicGrid(m), std::move(out));
}

SpectralField truncate(const SpectralField& F, const PeriodicGrid& coarse) {
  const auto c = F.coeffs();
  const std::size_t nyq = coarse.kmax();
  std::vector<Complex> out(nyq + 1);
  for (std::size_t k = 0; k < nyq; ++k) out[k] = c[k];
  out[nyq] = 2.0 * c[nyq].real();
  return SpectralField(coarse, std::move(out));
}

std::vector<double> pointwise_tendency(std::span<const double> u, std::span<const double> hu,
                                       std::span<const double> lu, std::span<const double> ux,
                                       double delta) {
  std::vector<double> out(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double denom = delta + u[j] * u[j] + hu[j] * hu[j];
    out[j] = -(u[j] * lu[j] - hu[j] * ux[j]) / (std::numbers::pi * denom);
  }
  return out;
}

}  // namespace

void require_admissible(const RealField& u, double delta) {
  if (!(delta >= 0.0)) fail(ErrorCode::InvalidArgument, "delta must be >= 0");
  if (delta == 0.0 && !(u.min() > kPositivityEpsilon))
    fail(ErrorCode::PositivityViolation,
         "positivity violation: min u = " + std::to_string(u.min()) + " with delta = 0");
}

Coefficients coefficients(const RealField& u, double delta) {
  require_admissible(u, delta);
  const RealField hu = hilbert(u);
  const std::size_t n = u.size();
  std::vector<double> v(n), g(n), r(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double denom = delta + u[j] * u[j] + hu[j] * hu[j];
    v[j] = -hu[j] / (std::numbers::pi * denom);
    g[j] = u[j] / (std::numbers::pi * denom);
    r[j] = std::sqrt(denom);
  }
  return {RealField(u.grid(), std::move(v)), RealField(u.grid(), std::move(g)),
          RealField(u.grid(), std::move(r)), delta};
}

RealField nonlinear_tendency(const RealField& u, double delta, bool dealias) {
  require_admissible(u, delta);
  const SpectralField U = forward(u);
  if (!dealias) {
    const Derived d = derive(U);
    return RealField(u.grid(),
                     pointwise_tendency(u.values(), d.hu.values(), d.lu.values(),
                                        d.ux.values(), delta));
  }
  const SpectralField Up = pad(U, padded_size(u.size()));
  const RealField up = inverse(Up);
  // Derivatives of the padded field; its top mode is empty, so the Nyquist
  // conventions of the fine grid do not matter.
  const Derived d = derive(Up);
  const RealField fine(up.grid(), pointwise_tendency(up.values(), d.hu.values(),
                                                     d.lu.values(), d.ux.values(), delta));
  return inverse(truncate(forward(fine), u.grid()));
}

RealField tendency_regularized(const RealField& u, double delta, bool dealias) {
  RealField n = nonlinear_tendency(u, delta, dealias);
  if (delta == 0.0) return n;
  return n + delta * second_derivative(u);
}

RealField tendency_flux(const RealField& u) {
  if (!(u.min() > kPositivityEpsilon))
    fail(ErrorCode::PositivityViolation,
         "flux form requires u > 0, min u = " + std::to_string(u.min()));
  const RealField hu = hilbert(u);
  std::vector<double> angle(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) angle[j] = std::atan(hu[j] / u[j]);
  return (-1.0 / std::numbers::pi) * derivative(RealField(u.grid(), std::move(angle)));
}

}  // namespace arcflow
