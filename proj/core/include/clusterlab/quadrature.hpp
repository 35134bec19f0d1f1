#pragma once

#include <functional>
#include <span>

namespace clusterlab {

/// 20-point Gauss-Legendre on each of `panels` equal subintervals of [a, b].
double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels);

/// Gauss-Legendre over consecutive breakpoints, `per_gap` panels between each pair.
double integrate_breakpoints(const std::function<double(double)>& f, std::span<const double> breaks,
                             int per_gap = 1);

struct CheckedIntegral {
  double value = 0.0;
  double error = 0.0;  // |I(2P) - I(P)|
};

/// Integrates with P and 2P panels; NumericError if the two differ by more
/// than `abs_tol + rel_tol |I|`.
CheckedIntegral integrate_checked(const std::function<double(double)>& f, double a, double b,
                                  int panels, double abs_tol, double rel_tol = 0.0);

}  // namespace clusterlab
