#pragma once

// Periodic grid on [0, 2pi), sampled fields, and Fourier-multiplier operators.
//
// Coefficient convention: c_k = (1/n) sum_j f(x_j) exp(-i k x_j), so c_0 is
// the grid mean. SpectralField stores only k = 0..n/2; negative modes are
// implied by Hermitian symmetry c_{-k} = conj(c_k). The Nyquist coefficient
// (k = n/2) represents the real mode c_N cos(N x).

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace arcflow {

class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t kmax() const noexcept { return n_ / 2; }
  double dx() const noexcept;
  double point(std::size_t j) const noexcept;

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::size_t n_;
};

class RealField {
 public:
  RealField(PeriodicGrid grid, std::vector<double> values);

  static RealField constant(PeriodicGrid grid, double value);
  static RealField sample(PeriodicGrid grid, const std::function<double(double)>& f);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }

  double min() const;
  double max() const;
  double mean() const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

class SpectralField {
 public:
  using Complex = std::complex<double>;

  SpectralField(PeriodicGrid grid, std::vector<Complex> coeffs);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  // Signed wavenumber access, |k| <= n/2.
  Complex operator()(long k) const;

 private:
  PeriodicGrid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField forward(const RealField& f);
RealField inverse(const SpectralField& F);

// Applies m(k) for k = 0..n/2; m(-k) = conj(m(k)) is implied.
SpectralField apply_multiplier(const SpectralField& F,
                               const std::function<std::complex<double>(long)>& m);

// Multiplier -i sgn(k); Nyquist zeroed.
RealField hilbert(const RealField& f);
// Multiplier |k|; Nyquist kept.
RealField frac_laplacian(const RealField& f);
// Multiplier i k; Nyquist zeroed.
RealField derivative(const RealField& f);
// Multiplier -k^2; Nyquist kept.
RealField second_derivative(const RealField& f);
// Multiplier exp(-tau k^2).
RealField heat_propagate(const RealField& f, double tau);

// Midpoint-rule evaluation of
//   (1/4pi) pv int_0^{2pi} (f(x) - f(x - a)) / sin(a/2)^2 da
// on m nodes a_j = (j + 1/2) 2pi/m, with f taken as its trigonometric
// interpolant between grid points.
RealField frac_laplacian_kernel(const RealField& f, std::size_t m);

// Evaluates the trigonometric interpolant of F at an arbitrary point.
double evaluate(const SpectralField& F, double x);

// (sum_{k != 0} 2pi |k|^{2s} |c_k|^2)^{1/2}, the L2 norm of Lambda^s f.
double sobolev_seminorm(const RealField& f, double s);
double sobolev_seminorm(const SpectralField& F, double s);

// Grid quadrature (2pi/n) sum |f_j|^2, square-rooted.
double l2_norm(const RealField& f);
double linf_norm(const RealField& f);

RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double s, const RealField& a);

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b);

}  // namespace arcflow
