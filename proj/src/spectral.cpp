#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "error.hpp"

namespace arcflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// One r2c/c2r plan pair per grid size. Planning goes through a mutex (the
// FFTW planner is not reentrant); execution uses the new-array interface,
// which is safe to call concurrently.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~PlanPair() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

const PlanPair& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto pair = std::make_unique<PlanPair>();
    double* real = fftw_alloc_real(n);
    fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    pair->r2c = fftw_plan_dft_r2c_1d(size, real, cplx, flags);
    pair->c2r = fftw_plan_dft_c2r_1d(size, cplx, real, flags);
    fftw_free(real);
    fftw_free(cplx);
    slot = std::move(pair);
  }
  return *slot;
}

bool is_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

RealField multiply(const RealField& f, const std::function<std::complex<double>(long)>& m) {
  return inverse(apply_multiplier(forward(f), m));
}

}  // namespace

PeriodicGrid::PeriodicGrid(std::size_t n) : n_(n) {
  if (n < 16 || n % 2 != 0)
    fail(ErrorCode::InvalidArgument,
         "grid size must be even and >= 16, got " + std::to_string(n));
}

double PeriodicGrid::dx() const noexcept { return kTwoPi / static_cast<double>(n_); }

double PeriodicGrid::point(std::size_t j) const noexcept {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(n_);
}

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
  if (!(a == b))
    fail(ErrorCode::GridMismatch, "grid mismatch: " + std::to_string(a.size()) + " vs " +
                                      std::to_string(b.size()));
}

RealField::RealField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    fail(ErrorCode::GridMismatch, "field has " + std::to_string(values_.size()) +
                                      " samples, grid has " + std::to_string(grid_.size()));
  if (!is_finite(values_)) fail(ErrorCode::NonFinite, "field contains non-finite values");
}

RealField RealField::constant(PeriodicGrid grid, double value) {
  return RealField(grid, std::vector<double>(grid.size(), value));
}

RealField RealField::sample(PeriodicGrid grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.point(j));
  return RealField(grid, std::move(v));
}

double RealField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double RealField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double RealField::mean() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum / static_cast<double>(values_.size());
}

SpectralField::SpectralField(PeriodicGrid grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.kmax() + 1)
    fail(ErrorCode::GridMismatch, "spectral field must hold n/2+1 coefficients");
}

SpectralField::Complex SpectralField::operator()(long k) const {
  const long kmax = static_cast<long>(grid_.kmax());
  if (k > kmax || k < -kmax) return {0.0, 0.0};
  if (k >= 0) return coeffs_[static_cast<std::size_t>(k)];
  return std::conj(coeffs_[static_cast<std::size_t>(-k)]);
}

SpectralField forward(const RealField& f) {
  const std::size_t n = f.size();
  std::vector<double> in(f.values().begin(), f.values().end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_execute_dft_r2c(plans_for(n).r2c, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& c : out) c *= scale;
  // Real data: DC and Nyquist are real up to rounding; pin them.
  out.front().imag(0.0);
  out.back().imag(0.0);
  return SpectralField(f.grid(), std::move(out));
}

RealField inverse(const SpectralField& F) {
  const std::size_t n = F.grid().size();
  std::vector<std::complex<double>> in(F.coeffs().begin(), F.coeffs().end());
  in.front().imag(0.0);
  in.back().imag(0.0);
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plans_for(n).c2r, reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
  return RealField(F.grid(), std::move(out));
}

SpectralField apply_multiplier(const SpectralField& F,
                               const std::function<std::complex<double>(long)>& m) {
  std::vector<std::complex<double>> out(F.coeffs().begin(), F.coeffs().end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= m(static_cast<long>(k));
  return SpectralField(F.grid(), std::move(out));
}

RealField hilbert(const RealField& f) {
  const long nyq = static_cast<long>(f.grid().kmax());
  return multiply(f, [nyq](long k) -> std::complex<double> {
    if (k == 0 || k == nyq) return 0.0;
    return {0.0, -1.0};
  });
}

RealField frac_laplacian(const RealField& f) {
  return multiply(f, [](long k) -> std::complex<double> { return static_cast<double>(k); });
}

RealField derivative(const RealField& f) {
  const long nyq = static_cast<long>(f.grid().kmax());
  return multiply(f, [nyq](long k) -> std::complex<double> {
    if (k == nyq) return 0.0;
    return {0.0, static_cast<double>(k)};
  });
}

RealField second_derivative(const RealField& f) {
  return multiply(f, [](long k) -> std::complex<double> {
    const double kk = static_cast<double>(k);
    return -kk * kk;
  });
}

RealField heat_propagate(const RealField& f, double tau) {
  if (!(tau >= 0.0)) fail(ErrorCode::InvalidArgument, "heat_propagate: tau must be >= 0");
  if (tau == 0.0) return f;
  return multiply(f, [tau](long k) -> std::complex<double> {
    const double kk = static_cast<double>(k);
    return std::exp(-tau * kk * kk);
  });
}

double evaluate(const SpectralField& F, double x) {
  const auto c = F.coeffs();
  const std::size_t nyq = c.size() - 1;
  // exp(i k x) by recurrence, renormalized against drift every few steps.
  const std::complex<double> step = std::polar(1.0, x);
  std::complex<double> phase = step;
  double sum = c[0].real();
  for (std::size_t k = 1; k < nyq; ++k) {
    sum += 2.0 * (c[k] * phase).real();
    phase *= step;
    if (k % 32 == 0) phase = std::polar(1.0, static_cast<double>(k + 1) * x);
  }
  sum += c[nyq].real() * std::cos(static_cast<double>(nyq) * x);
  return sum;
}

RealField frac_laplacian_kernel(const RealField& f, std::size_t m) {
  if (m < 2) fail(ErrorCode::InvalidArgument, "kernel quadrature needs m >= 2 nodes");
  const SpectralField F = forward(f);
  const std::size_t n = f.size();
  const double h = kTwoPi / static_cast<double>(m);

  // Nodes a and 2pi - a are paired, so the odd (principal-value) part of
  // the integrand cancels exactly; with odd m the node a = pi is alone.
  const std::size_t pairs = m / 2;
  std::vector<double> weight(pairs);
  for (std::size_t j = 0; j < pairs; ++j) {
    const double s = std::sin(0.5 * (static_cast<double>(j) + 0.5) * h);
    weight[j] = 1.0 / (s * s);
  }

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = f.grid().point(i);
    const double fx = f[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < pairs; ++j) {
      const double a = (static_cast<double>(j) + 0.5) * h;
      acc += (2.0 * fx - evaluate(F, x - a) - evaluate(F, x + a)) * weight[j];
    }
    if (m % 2 == 1) acc += fx - evaluate(F, x - std::numbers::pi);
    out[i] = acc * h / (4.0 * std::numbers::pi);
  }
  return RealField(f.grid(), std::move(out));
}

double sobolev_seminorm(const SpectralField& F, double s) {
  const auto c = F.coeffs();
  if (s < 0.0) {
    const double scale = std::max(1.0, std::abs(c[0]));
    if (std::abs(c[0]) > 1e-12 * scale)
      fail(ErrorCode::InvalidArgument,
           "negative Sobolev order requires a mean-zero field");
  }
  const std::size_t nyq = c.size() - 1;
  double sum = 0.0;
  for (std::size_t k = 1; k <= nyq; ++k) {
    // Interior modes appear as +-k; the Nyquist mode once.
    const double mult = (k == nyq) ? 1.0 : 2.0;
    sum += mult * std::pow(static_cast<double>(k), 2.0 * s) * std::norm(c[k]);
  }
  return std::sqrt(kTwoPi * sum);
}

double sobolev_seminorm(const RealField& f, double s) {
  return sobolev_seminorm(forward(f), s);
}

double l2_norm(const RealField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v * v;
  return std::sqrt(f.grid().dx() * sum);
}

double linf_norm(const RealField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

RealField operator+(const RealField& a, const RealField& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + b[j];
  return RealField(a.grid(), std::move(v));
}

RealField operator-(const RealField& a, const RealField& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] - b[j];
  return RealField(a.grid(), std::move(v));
}

RealField operator*(double s, const RealField& a) {
  std::vector<double> v(a.values().begin(), a.values().end());
  for (double& x : v) x *= s;
  return RealField(a.grid(), std::move(v));
}

}  // namespace arcflow
