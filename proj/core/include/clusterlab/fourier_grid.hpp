#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "clusterlab/lattice.hpp"

namespace clusterlab {

using Frequency = std::array<std::int32_t, kMaxDimension>;

/// f(x) = sum_j coeffs[j] exp(i freqs[j].x) on the torus R^n / (2 pi Z)^n.
struct TrigPolynomial {
  int dim = 2;
  std::vector<Frequency> freqs;
  std::vector<std::complex<double>> coeffs;

  std::complex<double> operator()(std::span<const double> x) const;
  /// Value and gradient of the real part.
  double real_value_and_gradient(std::span<const double> x, std::span<double> grad) const;
  /// Largest |freq_i| over all components (per-axis bandwidth).
  std::int64_t max_component() const;
  /// Largest Euclidean |freq|.
  double max_norm() const;
  /// Sum of |coeff|: a bound on sup |f|.
  double coefficient_l1() const;
};

/// Values on the uniform grid x_j = 2 pi j / m, row-major with the last
/// coordinate fastest. Exact at the grid points for any m (wrapping a
/// frequency by m does not change its grid samples).
std::vector<std::complex<double>> evaluate_on_grid(const TrigPolynomial& f, int m);

/// Unnormalised multidimensional DFT, sum_j x_j exp(sign 2 pi i j.k / m), row-major.
void fft_inplace(std::span<std::complex<double>> data, std::span<const int> dims, int sign);

/// Grid points beyond this are refused (memory guard).
inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 26;

std::size_t grid_point_count(int dim, int m);

/// Smallest power of two >= v.
int next_pow2(std::int64_t v);

/// Coordinates of flat grid index `idx` for an m^dim grid.
void grid_point(std::size_t idx, int dim, int m, std::span<double> x);

}  // namespace clusterlab
