#pragma once

// The even Schwartz pair (a, b = a^2) with Fourier transform of a supported
// in (-1, 1), built from a smooth even bump gamma on (-1/2, 1/2).
//
// Conventions: a_hat(t) = int a(tau) e^{-i tau t} dtau, so
// a(tau) = (1 / 2 pi) int a_hat(t) e^{i tau t} dt. With
// gamma_hat(tau) = int gamma(t) cos(tau t) dt we set
//   a(tau)     = (gamma_hat(tau) / gamma_hat(0))^2        (nonnegative, a(0) = 1)
//   a_hat(t)   = 2 pi (gamma * gamma)(t) / gamma_hat(0)^2  (support in (-1, 1)).

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace clusterlab {

struct MollifierProfile {
  double steepness = 1.0;        // gamma(t) = exp(-steepness / (1 - 4t^2))
  int gamma_panels = 64;         // Gauss-Legendre panels on [0, 1/2]
  double table_step = 1.0 / 32;  // tabulation step for a
  double table_max = 400.0;      // a is tabulated on [0, table_max]
  int conv_points = 2048;        // samples of gamma * gamma on [0, 1]

  /// key=value pairs, keys prefixed "mollifier.".
  std::map<std::string, std::string> to_config() const;
  /// Reads the keys written by to_config; unknown "mollifier." keys raise InvalidConfigError.
  static MollifierProfile from_config(const std::map<std::string, std::string>& kv);

  friend bool operator==(const MollifierProfile&, const MollifierProfile&) = default;
};

class Mollifier {
 public:
  /// a(tau); tabulated, direct quadrature beyond the table.
  double a(double tau) const;
  /// Fourier transform of a; zero for |t| >= 1.
  double a_hat(double t) const;
  double b(double tau) const {
    const double v = a(tau);
    return v * v;
  }
  double gamma(double t) const;

  /// a(tau) by quadrature, bypassing the table.
  double a_direct(double tau) const;
  /// a_hat(t) by quadrature of gamma * gamma, bypassing the table.
  double a_hat_direct(double t) const;

  const MollifierProfile& profile() const;
  /// Smallest tabulated tau0 with a(tau) < threshold for all tabulated tau >= tau0.
  double decay_radius(double threshold) const;

 private:
  struct Impl;
  friend Mollifier build_mollifier(const MollifierProfile&, std::function<double(double)>);
  explicit Mollifier(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Builds the pair from the default bump, or from `gamma` when given. The
/// bump must be even, nonnegative and not identically zero on (-1/2, 1/2);
/// otherwise ValidationError.
Mollifier build_mollifier(const MollifierProfile& profile = {},
                          std::function<double(double)> gamma = {});

/// Process-wide instance with the default profile.
const Mollifier& default_mollifier();

struct IdentityCheck {
  double lhs = 0.0;          // (eps / pi) int a_hat(eps t) e^{-i t lambda} cos(t mu) dt
  double rhs = 0.0;          // a((mu - lambda) / eps) + a((-mu - lambda) / eps)
  double discrepancy = 0.0;  // |lhs - rhs|
  double quadrature_error = 0.0;
  int panels = 0;
};

/// Eigenvalue-wise form of the cosine-transform splitting. NumericError if
/// the quadrature does not settle.
IdentityCheck frequency_identity_check(const Mollifier& m, double mu, double lambda, double eps);

/// Largest delta, certified on a 1e-4 grid, with b >= 1/2 on [0, delta].
/// Between grid points b moves by at most 2h (|b'| <= 2 since |a'| <= sup a = 1).
double half_level_delta(const Mollifier& m);

/// Smooth even cutoff equal to 1 on |t| <= scale and 0 on |t| >= 2 scale.
struct CutoffSpec {
  double scale = 1.0;
  double operator()(double t) const;
};

/// H_eps(tau) = int c(t) a_hat(eps t) e^{-i tau t} dt by direct quadrature.
double h_eps(const Mollifier& m, const CutoffSpec& c, double eps, double tau);

/// H_eps tabulated for |tau| <= tau_max through a uniform trapezoid rule
/// evaluated with an FFT (spectrally accurate: the integrand is smooth and
/// compactly supported). Outside the table it falls back to h_eps.
class HEpsTable {
 public:
  HEpsTable(const Mollifier& m, const CutoffSpec& c, double eps, double tau_max);
  double operator()(double tau) const;
  double tau_max() const { return tau_max_; }

 private:
  Mollifier m_;
  CutoffSpec c_;
  double eps_;
  double tau_max_;
  struct Table;
  std::shared_ptr<const Table> table_;
};

/// max over the grid {0, step, ..., tau_max} of (1 + tau)^order |f(tau)|.
double decay_constant(const std::function<double(double)>& f, int order, double tau_max,
                      double step = 0.25);

}  // namespace clusterlab
