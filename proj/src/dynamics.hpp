#pragma once

// Right-hand sides of
//   u_t + (1/pi) (u Lu - (Hu) u_x) / (delta + u^2 + (Hu)^2) - delta u_xx = 0
// with L the fractional Laplacian and H the circular Hilbert transform.
// At delta = 0 this is u_t + (1/pi) d/dx arctan(Hu/u) = 0.

#include "spectral.hpp"

namespace arcflow {

// min u must exceed this when delta == 0.
inline constexpr double kPositivityEpsilon = 1e-10;

struct Coefficients {
  RealField velocity;  // V = -(1/pi) Hu / (delta + u^2 + (Hu)^2)
  RealField gamma;     // gamma = (1/pi) u / (delta + u^2 + (Hu)^2)
  RealField rho;       // sqrt(delta + u^2 + (Hu)^2)
  double delta;
};

Coefficients coefficients(const RealField& u, double delta);

// -(1/pi)(u Lu - Hu u_x)/(delta + u^2 + Hu^2), i.e. the full tendency
// without the delta u_xx term. With dealias set, the products are formed on
// a 3/2-padded grid and truncated back.
RealField nonlinear_tendency(const RealField& u, double delta, bool dealias = false);

// Full regularized tendency: nonlinear_tendency + delta u_xx.
RealField tendency_regularized(const RealField& u, double delta, bool dealias = false);

// -(1/pi) d/dx arctan(Hu/u), with a spectral derivative.
RealField tendency_flux(const RealField& u);

// Throws PositivityViolation unless delta > 0 or min u > kPositivityEpsilon.
void require_admissible(const RealField& u, double delta);

}  // namespace arcflow
