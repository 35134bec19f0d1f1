#pragma once

// Diagonal of the mollified band projector a(eps^{-1}(sqrt(-Delta) - lambda))
// on the torus, and its splitting through lattice translates of free-space
// kernels.
//
// With f(mu) = a((mu - lambda)/eps) + a((-mu - lambda)/eps), Poisson summation
// gives (2 pi)^{-n} sum_k f(|k|) = sum_m K(2 pi m), where
//   K(z) = (2 pi)^{-n} int_0^inf f(r) r^{n-1} sigma_hat(r |z|) dr
// and K is supported in |z| <= 1/eps. A smooth time cutoff c splits f into
// f1 = (eps / 2 pi)[H_eps(lambda - r) + H_eps(lambda + r)] and f2 = f - f1;
// K1 (from f1) lives on |z| <= 2 * cutoff scale.

#include <complex>
#include <cstdint>
#include <functional>

#include "clusterlab/lattice.hpp"
#include "clusterlab/mollifier.hpp"

namespace clusterlab {

/// Fourier transform of the surface measure of S^{n-1} at radius r:
/// (2 pi)^{n/2} r^{-(n-2)/2} J_{(n-2)/2}(r); equals |S^{n-1}| at r = 0.
double sphere_ft(int n, double r);

/// Same quantity by quadrature over the polar angle,
/// |S^{n-2}| int_0^pi cos(r cos th) sin^{n-2} th dth.
double sphere_ft_quadrature(int n, double r);

/// m_+ in sphere_ft(r) = (1 + r)^{-(n-1)/2} (m_+(r) e^{ir} + m_-(r) e^{-ir}),
/// m_- = conj(m_+); from the Hankel function H^{(1)}. Requires r > 0.
std::complex<double> sphere_ft_m_plus(int n, double r);

/// max over r in [0, r_max] (grid `step`) of |sphere_ft(n, r)| (1 + r)^{(n-1)/2}.
double sphere_ft_envelope(int n, double r_max, double step = 0.05);

struct DiagonalSum {
  double value = 0.0;
  double truncation_estimate = 0.0;
  std::int64_t shell_lo = 0;
  std::int64_t shell_hi = 0;
};

/// A(x, x) = (2 pi)^{-n} sum_m r_n(m) a((sqrt(m) - lambda) / eps), summed over
/// the shells where a exceeds 1e-14. Constant in x.
DiagonalSum mollified_diagonal(const TorusConfig& cfg, double lambda, double eps,
                               const Mollifier& m);

/// J(x, x) = (2 pi)^{-n} sum_m r_n(m) a((-sqrt(m) - lambda) / eps).
DiagonalSum negative_branch_diagonal(const TorusConfig& cfg, double lambda, double eps,
                                     const Mollifier& m);

/// The cutoff used by the kernel decomposition: 1 on |t| <= 2 pi, 0 beyond 4 pi,
/// so that the cutoff part only reaches translates with |m| <= 2.
CutoffSpec kernel_cutoff();

struct KernelDiagonalReport {
  int n = 2;
  double lambda = 0.0;
  double epsilon = 0.0;
  double total = 0.0;        // shell sum
  double J = 0.0;
  double I1_main = 0.0;      // K1(0)
  double I1_neighbor = 0.0;  // sum over 1 <= |m| <= 2 of K1(2 pi m)
  double I21 = 0.0;          // sum over m != 0, |2 pi m| <= 1/eps of K1(2 pi m)
  double I22 = 0.0;          // sum over m != 0, |2 pi m| <= 1/eps of K(2 pi m)
  double I2_origin = 0.0;    // K(0) - K1(0)
  double I2 = 0.0;           // I2_origin + I22 - I21
  double reassembled = 0.0;  // I1_main + I1_neighbor + I2 - J
  double quadrature_error = 0.0;
  double truncation_error = 0.0;
  double ratio_total = 0.0;     // total / (eps lambda^{n-1})
  double ratio_I1 = 0.0;        // I1_main / (eps lambda^{n-1})
  double ratio_I22 = 0.0;       // |I22| / (lambda/eps)^{(n-1)/2}
  double ratio_J = 0.0;         // J / lambda^{-4}
  double ratio_two_term = 0.0;  // total / (eps lambda^{n-1} + (lambda/eps)^{(n-1)/2})
};

/// Requires 1/lambda < eps <= 1 (InvalidConfigError otherwise). NumericError if
/// the radial quadrature does not settle.
KernelDiagonalReport decompose_diagonal(const TorusConfig& cfg, double lambda, double eps,
                                        const Mollifier& m, const CutoffSpec& c = kernel_cutoff());

struct PoissonCheck {
  double lattice_side = 0.0;
  double translate_side = 0.0;
  double relative_discrepancy = 0.0;
  double tail_estimate = 0.0;  // |sum of K over the first shell of translates beyond the support|
  std::int64_t translates = 0;
};

/// Compares (2 pi)^{-n} sum_k f(|k|) with sum over |2 pi m| <= 1/eps of K(2 pi m).
/// NumericError if translates just outside the support still contribute.
PoissonCheck periodized_diagonal_check(const TorusConfig& cfg, double lambda, double eps,
                                       const Mollifier& m);

/// Harness self-test with f(mu) = exp(-w^2 mu^2 / 2): classical Poisson
/// summation, translates with |m| <= 2.
PoissonCheck periodized_gaussian_check(const TorusConfig& cfg, double width = 1.0);

/// K(z) for a radial profile f supported in [r_lo, r_hi]; panels of width `panel`.
double radial_kernel(int n, const std::function<double(double)>& f, double r_lo, double r_hi,
                     double panel, double z);

}  // namespace clusterlab
