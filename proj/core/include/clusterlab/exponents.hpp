#pragma once

// Exponent bookkeeping for spectral-cluster bounds on orthonormal systems:
// the single-function exponent sigma(p), the orthonormal-system exponent
// alpha(p), the shrinking band width epsilon(lambda) and the assembled
// right-hand side of the interpolated L^{p/2} density bound.

#include <string>

namespace clusterlab {

/// Lebesgue exponent in [1, inf]; infinity is a distinct state, not a large float.
class LpExponent {
 public:
  explicit LpExponent(double p);
  static LpExponent infinity() noexcept { return LpExponent(); }
  /// Parses "inf", "infinity" or a decimal number.
  static LpExponent parse(const std::string& text);

  bool is_infinite() const noexcept { return infinite_; }
  /// Finite value; throws DomainError for infinity.
  double value() const;
  /// 1/p, exactly 0 at infinity.
  double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / p_; }
  std::string to_string() const;

  friend bool operator==(const LpExponent&, const LpExponent&) = default;

 private:
  LpExponent() : p_(0.0), infinite_(true) {}
  double p_;
  bool infinite_;
};

/// 2(n+1)/(n-1), where both branches of sigma and alpha meet.
double critical_p(int n);

/// sigma(p) for p in [2, inf]; DomainError for p < 2.
double sigma(int n, LpExponent p);

/// Second (supercritical) branch formula n(1/2 - 1/p) - 1/2, exposed for branch checks.
double sigma_supercritical_branch(int n, LpExponent p);
/// First branch formula (n-1)/2 (1/2 - 1/p).
double sigma_subcritical_branch(int n, LpExponent p);

/// 1/alpha(p); exact 0 at p = inf.
double alpha_reciprocal(int n, LpExponent p);
/// alpha(p); +inf at p = inf.
double alpha(int n, LpExponent p);
double alpha_subcritical_branch(int n, LpExponent p);
double alpha_supercritical_branch(int n, LpExponent p);

/// Power of epsilon in the interpolated bound: 1 - 2(n+1)/(p(n-1)).
double eps_power(int n, LpExponent p);

/// Shrinking band width lambda^{-(n-1)/(n+1)}.
double shrink_rate(int n, double lambda);

/// lambda^{2 sigma(p)} eps^{eps_power(p)} dimR^{1/alpha(p)} without the constant.
/// DomainError below the critical exponent.
double corollary_rhs(int n, LpExponent p, double lambda, double eps, double dim_r);

struct ExponentProfile {
  int n = 2;
  LpExponent p = LpExponent::infinity();
  double sigma = 0.0;
  double alpha = 0.0;
  double alpha_reciprocal = 0.0;
  double eps_power = 0.0;
  double critical_p = 0.0;
};

ExponentProfile exponent_profile(int n, LpExponent p);

/// How a sweep picks epsilon from lambda.
struct EpsRule {
  enum class Kind { Fixed, Shrink, Power };
  Kind kind = Kind::Shrink;
  double value = 0.0;  // epsilon for Fixed, exponent e in lambda^{-e} for Power

  static EpsRule fixed(double eps) { return {Kind::Fixed, eps}; }
  static EpsRule shrink() { return {Kind::Shrink, 0.0}; }
  static EpsRule power(double e) { return {Kind::Power, e}; }
  /// "shrink", "fixed:<eps>" (or a bare number), "power:<e>".
  static EpsRule parse(const std::string& text);

  double apply(int n, double lambda) const;
  std::string to_string() const;
};

}  // namespace clusterlab
