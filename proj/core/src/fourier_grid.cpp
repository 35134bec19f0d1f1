#include "clusterlab/fourier_grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "clusterlab/errors.hpp"

namespace clusterlab {
namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::complex<double> TrigPolynomial::operator()(std::span<const double> x) const {
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    double phase = 0.0;
    for (int i = 0; i < dim; ++i) phase += freqs[j][i] * x[i];
    sum += coeffs[j] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return sum;
}

double TrigPolynomial::real_value_and_gradient(std::span<const double> x,
                                               std::span<double> grad) const {
  double value = 0.0;
  for (int i = 0; i < dim; ++i) grad[i] = 0.0;
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    double phase = 0.0;
    for (int i = 0; i < dim; ++i) phase += freqs[j][i] * x[i];
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    const double re = coeffs[j].real();
    const double im = coeffs[j].imag();
    value += re * c - im * s;
    // d/dx_i Re(coeff e^{i phase}) = -freq_i (re s + im c)
    const double slope = -(re * s + im * c);
    for (int i = 0; i < dim; ++i) grad[i] += slope * freqs[j][i];
  }
  return value;
}

std::int64_t TrigPolynomial::max_component() const {
  std::int64_t m = 0;
  for (const auto& f : freqs) {
    for (int i = 0; i < dim; ++i) m = std::max<std::int64_t>(m, std::abs(std::int64_t{f[i]}));
  }
  return m;
}

double TrigPolynomial::max_norm() const {
  double m = 0.0;
  for (const auto& f : freqs) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += double(f[i]) * f[i];
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

double TrigPolynomial::coefficient_l1() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::abs(c);
  return s;
}

std::size_t grid_point_count(int dim, int m) {
  long double total = 1.0L;
  for (int i = 0; i < dim; ++i) total *= m;
  if (total > static_cast<long double>(kMaxGridPoints)) {
    throw CapacityError("grid of " + std::to_string(m) + "^" + std::to_string(dim) +
                        " points exceeds the grid cap");
  }
  return static_cast<std::size_t>(total);
}

int next_pow2(std::int64_t v) {
  int p = 1;
  while (p < v) p <<= 1;
  return p;
}

void grid_point(std::size_t idx, int dim, int m, std::span<double> x) {
  const double h = 2.0 * std::numbers::pi / m;
  for (int i = dim - 1; i >= 0; --i) {
    x[i] = h * static_cast<double>(idx % static_cast<std::size_t>(m));
    idx /= static_cast<std::size_t>(m);
  }
}

void fft_inplace(std::span<std::complex<double>> data, std::span<const int> dims, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                         sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

std::vector<std::complex<double>> evaluate_on_grid(const TrigPolynomial& f, int m) {
  const std::size_t total = grid_point_count(f.dim, m);
  std::vector<std::complex<double>> data(total, 0.0);
  for (std::size_t j = 0; j < f.freqs.size(); ++j) {
    std::size_t idx = 0;
    for (int i = 0; i < f.dim; ++i) {
      std::int64_t w = f.freqs[j][i] % m;
      if (w < 0) w += m;
      idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(w);
    }
    data[idx] += f.coeffs[j];
  }
  std::vector<int> dims(static_cast<std::size_t>(f.dim), m);
  fft_inplace(data, dims, +1);
  return data;
}

}  // namespace clusterlab
