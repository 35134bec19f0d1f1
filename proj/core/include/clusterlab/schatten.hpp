#pragma once

// Schatten norms of h chi h-bar for a trigonometric polynomial h and a band
// projector chi.
//
// With T = h chi, the operator h chi h-bar equals T T^*, whose nonzero
// eigenvalues are those of T^* T restricted to the cluster. In the cluster
// basis T^* T is the Gram matrix G_ij = <h e_i, h e_j> = w_{k_i - k_j}, where
// |h|^2 = sum_delta w_delta e^{i delta.x}.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "clusterlab/cluster.hpp"
#include "clusterlab/exponents.hpp"
#include "clusterlab/fourier_grid.hpp"
#include "clusterlab/mollifier.hpp"

namespace clusterlab {

class TestFunction {
 public:
  /// h(x) = sum_j coeffs[j] exp(i freqs[j].x).
  TestFunction(int dim, std::vector<Frequency> freqs, std::vector<std::complex<double>> coeffs);

  /// The constant function 1.
  static TestFunction constant(int dim, std::complex<double> value = 1.0);

  int dim() const noexcept { return poly_.dim; }
  const TrigPolynomial& fourier() const noexcept { return poly_; }
  std::complex<double> operator()(std::span<const double> x) const { return poly_(x); }

  /// Fourier coefficients of |h|^2 (exact finite convolution).
  const TrigPolynomial& abs_sq() const noexcept { return abs_sq_; }
  /// w_delta, zero when delta is not a difference of two frequencies of h.
  std::complex<double> abs_sq_coefficient(const Frequency& delta) const;

  /// ||h||_2^2 = (2 pi)^n sum |c|^2.
  double l2_norm_sq() const;
  /// ||h||_2^2 by grid quadrature (exact on a grid finer than twice the bandwidth).
  double l2_norm_sq_grid() const;
  /// ||h||_q on a grid; exact when q is an even integer.
  double lq_norm(double q) const;

 private:
  TrigPolynomial poly_;
  TrigPolynomial abs_sq_;
  std::int64_t box_radius_ = 0;
  std::vector<std::complex<double>> box_;  // dense w_delta over [-box_radius, box_radius]^n
};

/// `modes` distinct random frequencies in [-max_freq, max_freq]^n with complex
/// Gaussian coefficients, from a seeded Mersenne twister.
TestFunction random_test_function(int dim, int modes, int max_freq, std::uint64_t seed);

inline constexpr std::int64_t kDenseEigenCap = 4000;

class GramMatrix {
 public:
  /// Always succeeds; the dense matrix (and hence eigenvalues) is only built
  /// for N <= cap. Trace and Frobenius norms are available for every N.
  GramMatrix(ClusterPtr cluster, TestFunction h, std::int64_t cap = kDenseEigenCap);

  const SpectralCluster& cluster() const { return *cluster_; }
  const ClusterPtr& cluster_ptr() const noexcept { return cluster_; }
  const TestFunction& test_function() const { return h_; }
  std::size_t size() const { return cluster_->size(); }
  bool is_dense() const { return static_cast<std::int64_t>(size()) <= cap_; }

  /// CapacityError above the cap.
  const Eigen::MatrixXcd& matrix() const;
  /// Nonincreasing eigenvalues; CapacityError above the cap, NumericError if
  /// the solver fails. Computed once, on first use.
  const std::vector<double>& eigenvalues() const;

  /// N w_0 = (2 pi)^{-n} N ||h||_2^2.
  double trace() const;
  /// sqrt(sum_{ij} |G_ij|^2), assembled entry by entry without the dense matrix.
  double frobenius() const;

 private:
  ClusterPtr cluster_;
  TestFunction h_;
  std::int64_t cap_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/// Checked constructor: CapacityError when N exceeds `cap`.
GramMatrix gram_matrix(ClusterPtr cluster, const TestFunction& h, std::int64_t cap = kDenseEigenCap);

struct SchattenReport {
  LpExponent alpha = LpExponent(1.0);
  double norm = 0.0;
  int n = 2;
  double lambda = 0.0;
  double epsilon = 0.0;
  double bound_rhs = 0.0;  // lambda^{n-1} eps ||h||_2^2 (alpha = 1) or
                           // lambda^{(n-1)/(n+1)} ||h||_{n+1}^2 (alpha = n + 1); else 0
  double ratio = 0.0;
};

/// (sum mu_i^alpha)^{1/alpha} over the eigenvalues of G; alpha = 1 and 2 are
/// taken from the trace and Frobenius norms and work above the eigen cap.
SchattenReport schatten_norm(const GramMatrix& g, LpExponent alpha);

struct Theorem23Result {
  std::int64_t count = 0;
  double trace_norm = 0.0;
  double rhs = 0.0;  // (eps lambda^{n-1} + (lambda/eps)^{(n-1)/2}) ||h||_2^2
  double ratio = 0.0;
  bool empty = false;
};

Theorem23Result theorem23_check(const TorusConfig& cfg, double lambda, double eps,
                                const TestFunction& h);

struct DualPairing {
  double lhs = 0.0;  // sum_j |zeta_j| int |g_j|^2 |h|^2
  double rhs = 0.0;  // ||G||_{S^{alpha'}} ||zeta||_{l^alpha}
  double slack = 0.0;
  LpExponent alpha = LpExponent(1.0);
  LpExponent alpha_dual = LpExponent::infinity();
};

/// Trace duality sum_j |zeta_j| int |g_j|^2 |h|^2 <= ||h chi h-bar||_{S^{alpha'}} ||zeta||_alpha.
/// The left side is integrated on an alias-free grid; the right side comes
/// from the Gram matrix of the full cluster.
DualPairing dual_pairing_check(const ClusterSubspace& r, std::span<const double> zeta,
                               const TestFunction& h, LpExponent alpha);

/// Subspace spanned by the top eigenvector of G, the maximiser of <h g, h g>.
ClusterSubspace top_eigenvector_subspace(const GramMatrix& g);

struct OpineReport {
  double lhs = 0.0;       // ||h b(eps^{-1}(sqrt(-Delta) - lambda)) h-bar||_{S^1}
  double rhs_sum = 0.0;   // sum_l (1 + |l - lambda| / eps)^{-2} ||h chi_l h-bar||_{S^1}
  double constant = 0.0;  // lhs / rhs_sum
  std::int64_t l_lo = 0;
  std::int64_t l_hi = 0;
};

/// Trace-norm form of 0 <= h b(...) h-bar <= C h (1 + eps^{-1}|sqrt(-Delta) - lambda|)^{-2} h-bar
/// with unit bands chi_l = 1_[l, l+1). Both sides are summed over the unit
/// bands meeting the window where `profile` is non-negligible.
OpineReport opine_chain_check(const TorusConfig& cfg, double lambda, double eps,
                              const std::function<double(double)>& profile, double window,
                              const TestFunction& h);
OpineReport opine_chain_check(const TorusConfig& cfg, double lambda, double eps,
                              const Mollifier& m, const TestFunction& h);

}  // namespace clusterlab
