#include "clusterlab/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <sstream>

#include "clusterlab/errors.hpp"

namespace clusterlab {
namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

double panel(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  // only the positive half of the symmetric rule is stored
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] == 0.0 ? w[i] * f(mid) : w[i] * (f(mid + half * x[i]) + f(mid - half * x[i]));
  }
  return s * half;
}

}  // namespace

double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    const double hi = i + 1 == panels ? b : a + (i + 1) * h;
    s += panel(f, lo, hi);
  }
  return s;
}

double integrate_breakpoints(const std::function<double(double)>& f, std::span<const double> breaks,
                             int per_gap) {
  double s = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (breaks[i] > breaks[i - 1]) s += integrate_panels(f, breaks[i - 1], breaks[i], per_gap);
  }
  return s;
}

CheckedIntegral integrate_checked(const std::function<double(double)>& f, double a, double b,
                                  int panels, double abs_tol, double rel_tol) {
  const double coarse = integrate_panels(f, a, b, panels);
  const double fine = integrate_panels(f, a, b, 2 * panels);
  CheckedIntegral out{fine, std::abs(fine - coarse)};
  if (!std::isfinite(fine) || out.error > abs_tol + rel_tol * std::abs(fine)) {
    std::ostringstream msg;
    msg << "quadrature on [" << a << ", " << b << "] did not converge: |I(2P) - I(P)| = "
        << out.error;
    throw NumericError(msg.str());
  }
  return out;
}

}  // namespace clusterlab
