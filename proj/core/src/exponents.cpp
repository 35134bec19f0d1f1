#include "clusterlab/exponents.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "clusterlab/decimal.hpp"
#include "clusterlab/errors.hpp"

namespace clusterlab {
namespace {

void require_dimension(int n) {
  if (n < 2) throw InvalidConfigError("exponents need dimension n >= 2");
}

void require_at_least_two(LpExponent p) {
  if (!p.is_infinite() && p.value() < 2.0) throw DomainError("p must lie in [2, inf]");
}

bool below_critical(int n, LpExponent p) {
  return !p.is_infinite() && p.value() < critical_p(n);
}

}  // namespace

LpExponent::LpExponent(double p) : p_(p), infinite_(false) {
  if (std::isinf(p) && p > 0) {
    infinite_ = true;
    p_ = 0.0;
  } else if (!(p >= 1.0)) {
    throw DomainError("Lebesgue exponent must be >= 1");
  }
}

LpExponent LpExponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse exponent '" + text + "'");
  }
  if (used != text.size()) throw DomainError("cannot parse exponent '" + text + "'");
  return LpExponent(v);
}

double LpExponent::value() const {
  if (infinite_) throw DomainError("exponent is infinite");
  return p_;
}

std::string LpExponent::to_string() const {
  return infinite_ ? "inf" : exact::shortest_decimal(p_);
}

double critical_p(int n) {
  require_dimension(n);
  return 2.0 * (n + 1) / (n - 1);
}

double sigma_subcritical_branch(int n, LpExponent p) {
  return 0.5 * (n - 1) * (0.5 - p.reciprocal());
}

double sigma_supercritical_branch(int n, LpExponent p) {
  return n * (0.5 - p.reciprocal()) - 0.5;
}

double sigma(int n, LpExponent p) {
  require_dimension(n);
  require_at_least_two(p);
  return below_critical(n, p) ? sigma_subcritical_branch(n, p) : sigma_supercritical_branch(n, p);
}

double alpha_subcritical_branch(int, LpExponent p) {
  if (p.is_infinite()) return 2.0;
  return 2.0 * p.value() / (p.value() + 2.0);
}

double alpha_supercritical_branch(int n, LpExponent p) {
  if (p.is_infinite()) return std::numeric_limits<double>::infinity();
  return p.value() * (n - 1) / (2.0 * n);
}

double alpha_reciprocal(int n, LpExponent p) {
  require_dimension(n);
  require_at_least_two(p);
  if (below_critical(n, p)) return 1.0 / alpha_subcritical_branch(n, p);
  // 2n / (p (n-1)), written through 1/p so infinity is exact
  return 2.0 * n * p.reciprocal() / (n - 1);
}

double alpha(int n, LpExponent p) {
  require_dimension(n);
  require_at_least_two(p);
  return below_critical(n, p) ? alpha_subcritical_branch(n, p) : alpha_supercritical_branch(n, p);
}

double eps_power(int n, LpExponent p) {
  require_dimension(n);
  require_at_least_two(p);
  return 1.0 - 2.0 * (n + 1) * p.reciprocal() / (n - 1);
}

double shrink_rate(int n, double lambda) {
  require_dimension(n);
  if (!(lambda >= 1.0)) throw DomainError("shrink_rate requires lambda >= 1");
  return std::pow(lambda, -static_cast<double>(n - 1) / (n + 1));
}

double corollary_rhs(int n, LpExponent p, double lambda, double eps, double dim_r) {
  require_dimension(n);
  require_at_least_two(p);
  if (below_critical(n, p)) {
    throw DomainError("interpolated bound holds only for p >= 2(n+1)/(n-1)");
  }
  if (!(lambda > 0.0) || !(eps > 0.0) || !(dim_r >= 1.0)) {
    throw DomainError("corollary_rhs needs lambda > 0, eps > 0, dimR >= 1");
  }
  return std::pow(lambda, 2.0 * sigma(n, p)) * std::pow(eps, eps_power(n, p)) *
         std::pow(dim_r, alpha_reciprocal(n, p));
}

ExponentProfile exponent_profile(int n, LpExponent p) {
  ExponentProfile out;
  out.n = n;
  out.p = p;
  out.sigma = sigma(n, p);
  out.alpha = alpha(n, p);
  out.alpha_reciprocal = alpha_reciprocal(n, p);
  out.eps_power = eps_power(n, p);
  out.critical_p = critical_p(n);
  return out;
}

EpsRule EpsRule::parse(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw InvalidConfigError("bad epsilon rule '" + text + "'");
    return v;
  };
  if (text == "shrink") return shrink();
  if (text.rfind("fixed:", 0) == 0) return fixed(number(text.substr(6)));
  if (text.rfind("power:", 0) == 0) return power(number(text.substr(6)));
  return fixed(number(text));
}

double EpsRule::apply(int n, double lambda) const {
  switch (kind) {
    case Kind::Fixed:
      return value;
    case Kind::Shrink:
      return shrink_rate(n, lambda);
    case Kind::Power:
      return std::pow(lambda, -value);
  }
  return value;
}

std::string EpsRule::to_string() const {
  switch (kind) {
    case Kind::Fixed:
      return "fixed:" + exact::shortest_decimal(value);
    case Kind::Shrink:
      return "shrink";
    case Kind::Power:
      return "power:" + exact::shortest_decimal(value);
  }
  return "shrink";
}

}  // namespace clusterlab
