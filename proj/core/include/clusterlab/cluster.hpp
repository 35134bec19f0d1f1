#pragma once

// Orthonormal subspaces of a spectral cluster and their densities.
//
// A subspace R is stored through an N x d coefficient matrix B with
// orthonormal columns: g_j = sum_k B(k, j) e_k. The (weighted) density
// rho(x) = sum_j zeta_j |g_j(x)|^2 is stored through P = B diag(zeta) B^*,
// which makes it independent of the chosen basis of R.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "clusterlab/exponents.hpp"
#include "clusterlab/fourier_grid.hpp"
#include "clusterlab/lattice.hpp"

namespace clusterlab {

using ClusterPtr = std::shared_ptr<const SpectralCluster>;

class ClusterSubspace {
 public:
  const SpectralCluster& cluster() const noexcept { return *cluster_; }
  const ClusterPtr& cluster_ptr() const noexcept { return cluster_; }
  const Eigen::MatrixXcd& basis() const noexcept { return basis_; }
  Eigen::Index dim() const noexcept { return basis_.cols(); }

 private:
  friend ClusterSubspace make_subspace(ClusterPtr, Eigen::MatrixXcd, double);
  ClusterSubspace(ClusterPtr c, Eigen::MatrixXcd b) : cluster_(std::move(c)), basis_(std::move(b)) {}

  ClusterPtr cluster_;
  Eigen::MatrixXcd basis_;
};

inline constexpr double kOrthonormalTolerance = 1e-12;

/// Validates B^* B = I (entrywise, to `tol`) and 1 <= d <= N. The
/// ValidationError message names the worst Gram entry.
ClusterSubspace make_subspace(ClusterPtr cluster, Eigen::MatrixXcd basis,
                              double tol = kOrthonormalTolerance);

/// Orthonormal columns spanning the same space as `m` (Householder QR).
Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& m);

/// Complex Gaussian matrix from a seeded 64-bit Mersenne twister.
Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

/// Haar-distributed unitary of size d.
Eigen::MatrixXcd random_unitary(Eigen::Index d, std::uint64_t seed);

/// Random d-dimensional subspace of the cluster (orthonormalised Gaussian frame).
ClusterSubspace random_subspace(ClusterPtr cluster, Eigen::Index d, std::uint64_t seed);

/// The whole cluster, B = identity.
ClusterSubspace full_subspace(ClusterPtr cluster);

class DensityFunction {
 public:
  DensityFunction(ClusterPtr cluster, Eigen::MatrixXcd projector, bool real_weights,
                  bool nonnegative_weights);

  const SpectralCluster& cluster() const noexcept { return *cluster_; }
  const Eigen::MatrixXcd& projector() const noexcept { return projector_; }
  bool is_real() const noexcept { return real_; }
  bool is_nonnegative() const noexcept { return nonnegative_; }

  /// rho(x) = (2 pi)^{-n} sum_{k,k'} P(k, k') exp(i (k - k').x); O(N^2).
  std::complex<double> value(std::span<const double> x) const;
  /// Real part of value(); the density itself when the weights are real.
  double operator()(std::span<const double> x) const { return value(x).real(); }

  /// Integral over the torus, equal to trace(P).
  std::complex<double> integral() const { return projector_.trace(); }

  /// Coefficients on difference frequencies k - k'.
  TrigPolynomial fourier() const;

 private:
  ClusterPtr cluster_;
  Eigen::MatrixXcd projector_;
  bool real_;
  bool nonnegative_;
};

/// rho^R, or the weighted sum with `weights` (length d; ShapeError otherwise).
DensityFunction density(const ClusterSubspace& subspace,
                        std::optional<std::span<const std::complex<double>>> weights = std::nullopt);
DensityFunction density(const ClusterSubspace& subspace, std::span<const double> weights);

/// sum_j zeta_j |g_j(x)|^2 summed basis function by basis function; the
/// reference against which the projector route is checked.
std::complex<double> direct_density(const ClusterSubspace& subspace,
                                    std::span<const std::complex<double>> weights,
                                    std::span<const double> x);

struct NormEstimate {
  double value = 0.0;
  double lower = 0.0;           // certified for q = inf
  double upper = 0.0;           // certified for q = inf
  double error_estimate = 0.0;  // finite q: grid-refinement difference
  int grid = 0;                 // per-axis grid size used
  bool exact = false;           // finite q integrated without aliasing
  bool converged = true;        // q = inf: bracket met the requested width
};

struct SupOptions {
  double rel_width = 1e-7;          // requested (upper - lower) / lower
  std::size_t max_evaluations = 400'000;
};

/// ||rho||_{L^q(T^n)} for q in [1, inf] (DomainError below 1).
///
/// Finite q: rectangle rule on an m^n grid, m a power of two with
/// m >= 4(lambda + eps) + 1, enlarged so that rho^q is integrated without
/// aliasing whenever q is an integer and rho^q is a trigonometric polynomial.
/// q = inf: the grid maximum gives the lower end; Bernstein's inequality for
/// the second derivative (|D_u^2 rho| <= D^2 sup|rho|, D the largest
/// frequency) bounds the excess inside each grid cell, and cells that can
/// still beat the incumbent are subdivided until the bracket is tight.
NormEstimate lp_norm(const DensityFunction& rho, LpExponent q, const SupOptions& options = {});

struct Theorem1Result {
  double lambda = 0.0;
  double epsilon = 0.0;
  std::int64_t count = 0;
  double sup_density = 0.0;  // N / (2 pi)^n for the full cluster
  double ratio = 0.0;        // sup_density / (lambda^{n-1} eps)
  bool empty = false;
};

/// sup rho^U / (lambda^{n-1} eps(lambda)) for the full cluster U.
Theorem1Result theorem1_ratio(const TorusConfig& cfg, double lambda, const EpsRule& rule);

}  // namespace clusterlab
