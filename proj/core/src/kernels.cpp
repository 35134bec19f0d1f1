#include "clusterlab/kernels.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "clusterlab/errors.hpp"
#include "clusterlab/quadrature.hpp"

namespace clusterlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kDecayThreshold = 1e-14;
constexpr std::size_t kMaxRadialNodes = std::size_t{1} << 24;

struct RadialGrid {
  std::vector<double> r;
  std::vector<double> w;  // quadrature weight times r^{n-1}
};

RadialGrid radial_grid(int n, double lo, double hi, double panel) {
  RadialGrid g;
  if (!(hi > lo)) return g;
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / panel));
  if (panels * 20 > kMaxRadialNodes) {
    throw CapacityError("radial quadrature would need more than 2^24 nodes");
  }
  const double h = (hi - lo) / static_cast<double>(panels);
  g.r.reserve(panels * 20);
  g.w.reserve(panels * 20);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        if (x[i] == 0.0 && sgn < 0.0) continue;
        const double r = mid + sgn * 0.5 * h * x[i];
        g.r.push_back(r);
        g.w.push_back(0.5 * h * w[i] * std::pow(r, n - 1));
      }
    }
  }
  return g;
}

// K(z) from profile samples on a radial grid.
double transform(int n, const RadialGrid& g, const std::vector<double>& f, double z) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < g.r.size(); ++i) s += g.w[i] * f[i] * sphere_ft(n, g.r[i] * z);
  return static_cast<double>(s) / std::pow(kTwoPi, n);
}

std::vector<double> sample(const RadialGrid& g, const std::function<double(double)>& f) {
  std::vector<double> v(g.r.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.r[i]);
  return v;
}

// Translate distances |m| (m != 0, |m|^2 <= max_sq) with their multiplicities.
std::vector<std::pair<std::int64_t, std::int64_t>> translate_shells(const TorusConfig& cfg,
                                                                   std::int64_t max_sq) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  if (max_sq < 1) return out;
  const auto hist = shell_histogram(cfg, 1, max_sq);
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (hist[i] > 0) out.emplace_back(static_cast<std::int64_t>(i) + 1, hist[i]);
  }
  return out;
}

double decay_window(const Mollifier& m, double eps) {
  return eps * m.decay_radius(kDecayThreshold);
}

// The radial profile f, cut where the shell sums are cut.
std::function<double(double)> band_profile(const Mollifier& m, double lambda, double eps) {
  const double cut = m.decay_radius(kDecayThreshold);
  return [&m, lambda, eps, cut](double r) {
    const double u = (r - lambda) / eps;
    const double v = (r + lambda) / eps;
    return (std::abs(u) <= cut ? m.a(u) : 0.0) + (v <= cut ? m.a(v) : 0.0);
  };
}

}  // namespace

double sphere_ft(int n, double r) {
  r = std::abs(r);
  const double nu = 0.5 * (n - 2);
  if (r < 1e-6) {
    // series: area * (1 - r^2 / (2n))
    return unit_sphere_area(n) * (1.0 - r * r / (2.0 * n));
  }
  return std::pow(kTwoPi, 0.5 * n) * std::pow(r, -nu) * boost::math::cyl_bessel_j(nu, r);
}

double sphere_ft_quadrature(int n, double r) {
  const double area = n == 2 ? 2.0 : unit_sphere_area(n - 1);
  const int panels = 16 + static_cast<int>(std::ceil(std::abs(r)));
  auto f = [&](double th) { return std::cos(r * std::cos(th)) * std::pow(std::sin(th), n - 2); };
  return area * integrate_checked(f, 0.0, kPi, panels, 1e-13, 1e-12).value;
}

std::complex<double> sphere_ft_m_plus(int n, double r) {
  if (!(r > 0.0)) throw DomainError("m_+ requires r > 0");
  const double nu = 0.5 * (n - 2);
  const std::complex<double> hankel(boost::math::cyl_bessel_j(nu, r),
                                    boost::math::cyl_neumann(nu, r));
  const std::complex<double> phase(std::cos(r), -std::sin(r));
  return std::pow(1.0 + r, 0.5 * (n - 1)) * std::pow(kTwoPi, 0.5 * n) * std::pow(r, -nu) *
         hankel * phase / 2.0;
}

double sphere_ft_envelope(int n, double r_max, double step) {
  double c = 0.0;
  for (double r = 0.0; r <= r_max; r += step) {
    c = std::max(c, std::abs(sphere_ft(n, r)) * std::pow(1.0 + r, 0.5 * (n - 1)));
  }
  return c;
}

DiagonalSum mollified_diagonal(const TorusConfig& cfg, double lambda, double eps,
                               const Mollifier& m) {
  const SpectralBand band(lambda, eps);
  const int n = cfg.dim();
  const double w = decay_window(m, eps);
  DiagonalSum out;
  const double lo = std::max(0.0, lambda - w);
  out.shell_lo = static_cast<std::int64_t>(std::floor(lo * lo));
  out.shell_hi = static_cast<std::int64_t>(std::ceil((lambda + w) * (lambda + w)));
  if (out.shell_hi - out.shell_lo > 500'000'000) {
    throw RangeError("diagonal shell range exceeds the truncation cap");
  }
  const auto hist = shell_histogram(cfg, out.shell_lo, out.shell_hi);
  long double s = 0.0L;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (hist[i] == 0) continue;
    const double mu = std::sqrt(static_cast<double>(out.shell_lo + static_cast<std::int64_t>(i)));
    s += static_cast<long double>(hist[i]) * m.a((mu - lambda) / eps);
  }
  const double vol = std::pow(kTwoPi, n);
  out.value = static_cast<double>(s) / vol;
  // excluded points each carry a < threshold; count them by volume
  const double omega = unit_ball_volume(n);
  const double outer = lambda + w;
  out.truncation_estimate =
      kDecayThreshold * omega * (std::pow(lo, n) + std::pow(outer + w, n) - std::pow(outer, n)) /
      vol;
  return out;
}

DiagonalSum negative_branch_diagonal(const TorusConfig& cfg, double lambda, double eps,
                                     const Mollifier& m) {
  const SpectralBand band(lambda, eps);
  const int n = cfg.dim();
  const double w = decay_window(m, eps);
  DiagonalSum out;
  const double reach = std::max(0.0, w - lambda);
  out.shell_hi = static_cast<std::int64_t>(std::ceil(reach * reach));
  const auto hist = shell_histogram(cfg, 0, out.shell_hi);
  long double s = 0.0L;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (hist[i] == 0) continue;
    const double mu = std::sqrt(static_cast<double>(i));
    s += static_cast<long double>(hist[i]) * m.a((-mu - lambda) / eps);
  }
  const double vol = std::pow(kTwoPi, n);
  out.value = static_cast<double>(s) / vol;
  const double r0 = std::max(reach, 0.0);
  out.truncation_estimate =
      kDecayThreshold * unit_ball_volume(n) * (std::pow(r0 + w, n) - std::pow(r0, n)) / vol;
  return out;
}

CutoffSpec kernel_cutoff() { return CutoffSpec{kTwoPi}; }

double radial_kernel(int n, const std::function<double(double)>& f, double r_lo, double r_hi,
                     double panel, double z) {
  const RadialGrid g = radial_grid(n, r_lo, r_hi, panel);
  return transform(n, g, sample(g, f), z);
}

KernelDiagonalReport decompose_diagonal(const TorusConfig& cfg, double lambda, double eps,
                                        const Mollifier& m, const CutoffSpec& c) {
  if (!(eps * lambda > 1.0) || !(eps <= 1.0)) {
    throw InvalidConfigError("kernel decomposition requires 1/lambda < eps <= 1");
  }
  const int n = cfg.dim();
  KernelDiagonalReport rep;
  rep.n = n;
  rep.lambda = lambda;
  rep.epsilon = eps;

  const DiagonalSum total = mollified_diagonal(cfg, lambda, eps, m);
  const DiagonalSum jsum = negative_branch_diagonal(cfg, lambda, eps, m);
  rep.total = total.value;
  rep.J = jsum.value;

  const double w = decay_window(m, eps);
  const double w1 = std::max(w, 150.0);
  const HEpsTable h(m, c, eps, 2.0 * lambda + w1 + 1.0);
  const auto f = band_profile(m, lambda, eps);
  auto f1 = [&](double r) { return eps / kTwoPi * (h(lambda - r) + h(lambda + r)); };

  const double fine = std::min(eps, 1.0) / 8.0;
  const double lo = lambda <= w ? 0.0 : lambda - w;
  const double lo1 = lambda <= w1 ? 0.0 : lambda - w1;

  const auto neighbors = translate_shells(cfg, 4);
  const auto reach = static_cast<std::int64_t>(std::floor(1.0 / (eps * kTwoPi) * (1.0 / (eps * kTwoPi))));
  const auto inside = translate_shells(cfg, reach);

  struct Sums {
    double k0 = 0.0;
    double k1_0 = 0.0;
    double neighbor = 0.0;
    double i21 = 0.0;
    double i22 = 0.0;
  };
  auto evaluate = [&](double panel) {
    const RadialGrid g = radial_grid(n, lo, lambda + w, panel);
    const RadialGrid g1 = radial_grid(n, lo1, lambda + w1, panel);
    const auto fv = sample(g, f);
    const auto f1v = sample(g1, f1);
    Sums s;
    s.k0 = transform(n, g, fv, 0.0);
    s.k1_0 = transform(n, g1, f1v, 0.0);
    for (const auto& [sq, mult] : neighbors) {
      s.neighbor += static_cast<double>(mult) *
                    transform(n, g1, f1v, kTwoPi * std::sqrt(static_cast<double>(sq)));
    }
    for (const auto& [sq, mult] : inside) {
      const double z = kTwoPi * std::sqrt(static_cast<double>(sq));
      s.i22 += static_cast<double>(mult) * transform(n, g, fv, z);
      s.i21 += static_cast<double>(mult) * transform(n, g1, f1v, z);
    }
    return s;
  };
  const Sums a = evaluate(2.0 * fine);
  const Sums b = evaluate(fine);

  rep.I1_main = b.k1_0;
  rep.I1_neighbor = b.neighbor;
  rep.I21 = b.i21;
  rep.I22 = b.i22;
  rep.I2_origin = b.k0 - b.k1_0;
  rep.I2 = rep.I2_origin + rep.I22 - rep.I21;
  rep.reassembled = rep.I1_main + rep.I1_neighbor + rep.I2 - rep.J;
  rep.quadrature_error = std::abs(a.k0 - b.k0) + std::abs(a.k1_0 - b.k1_0) +
                         std::abs(a.neighbor - b.neighbor) + std::abs(a.i21 - b.i21) +
                         std::abs(a.i22 - b.i22);
  // profile mass left outside the radial windows
  const double edge = std::abs(f1(lambda + w1)) + std::abs(f1(lo1)) + std::abs(f(lambda + w));
  rep.truncation_error = total.truncation_estimate + jsum.truncation_estimate +
                         edge * std::pow(lambda + w1, n) * unit_sphere_area(n) / std::pow(kTwoPi, n);
  if (!std::isfinite(rep.reassembled) ||
      rep.quadrature_error > 1e-6 * std::max(1.0, std::abs(rep.total))) {
    std::ostringstream msg;
    msg << "radial quadrature did not settle at lambda " << lambda << ", eps " << eps
        << ": panel-halving difference " << rep.quadrature_error;
    throw NumericError(msg.str());
  }

  const double main_scale = eps * std::pow(lambda, n - 1);
  const double osc_scale = std::pow(lambda / eps, 0.5 * (n - 1));
  rep.ratio_total = rep.total / main_scale;
  rep.ratio_I1 = rep.I1_main / main_scale;
  rep.ratio_I22 = std::abs(rep.I22) / osc_scale;
  rep.ratio_J = rep.J * std::pow(lambda, 4);
  rep.ratio_two_term = rep.total / (main_scale + osc_scale);
  return rep;
}

PoissonCheck periodized_diagonal_check(const TorusConfig& cfg, double lambda, double eps,
                                       const Mollifier& m) {
  const int n = cfg.dim();
  PoissonCheck out;
  out.lattice_side = mollified_diagonal(cfg, lambda, eps, m).value +
                     negative_branch_diagonal(cfg, lambda, eps, m).value;

  const double w = decay_window(m, eps);
  const double lo = lambda <= w ? 0.0 : lambda - w;
  const RadialGrid g = radial_grid(n, lo, lambda + w, std::min(eps, 1.0) / 8.0);
  const auto fv = sample(g, band_profile(m, lambda, eps));

  const double support = 1.0 / eps;
  const auto inside_sq = static_cast<std::int64_t>(std::floor(support * support / (kTwoPi * kTwoPi)));
  // one extra shell of translates past the support radius
  const double beyond = support + kTwoPi;
  const auto outside_sq = static_cast<std::int64_t>(std::floor(beyond * beyond / (kTwoPi * kTwoPi)));

  double translate = transform(n, g, fv, 0.0);
  out.translates = 1;
  double tail = 0.0;
  for (const auto& [sq, mult] : translate_shells(cfg, outside_sq)) {
    const double k = static_cast<double>(mult) *
                     transform(n, g, fv, kTwoPi * std::sqrt(static_cast<double>(sq)));
    if (sq <= inside_sq) {
      translate += k;
      out.translates += mult;
    } else {
      tail += k;
    }
  }
  out.translate_side = translate;
  out.tail_estimate = std::abs(tail);
  out.relative_discrepancy =
      std::abs(out.lattice_side - out.translate_side) / std::abs(out.lattice_side);
  if (out.tail_estimate > 1e-6 * std::abs(out.translate_side)) {
    std::ostringstream msg;
    msg << "translate sum not converged: shells beyond |z| = 1/eps contribute "
        << out.tail_estimate;
    throw NumericError(msg.str());
  }
  return out;
}

PoissonCheck periodized_gaussian_check(const TorusConfig& cfg, double width) {
  const int n = cfg.dim();
  PoissonCheck out;
  auto f = [&](double mu) { return std::exp(-0.5 * width * width * mu * mu); };
  // terms past |k| = 40 / width are below 1e-300
  const double kmax = 40.0 / width;
  const auto hist = shell_histogram(cfg, 0, static_cast<std::int64_t>(kmax * kmax));
  long double s = 0.0L;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (hist[i] > 0) s += static_cast<long double>(hist[i]) * f(std::sqrt(static_cast<double>(i)));
  }
  out.lattice_side = static_cast<double>(s) / std::pow(kTwoPi, n);

  const RadialGrid g = radial_grid(n, 0.0, kmax, 0.05);
  const auto fv = sample(g, f);
  double translate = transform(n, g, fv, 0.0);
  out.translates = 1;
  for (const auto& [sq, mult] : translate_shells(cfg, 4)) {
    translate += static_cast<double>(mult) *
                 transform(n, g, fv, kTwoPi * std::sqrt(static_cast<double>(sq)));
    out.translates += mult;
  }
  double tail = 0.0;
  for (const auto& [sq, mult] : translate_shells(cfg, 9)) {
    if (sq > 4) {
      tail += static_cast<double>(mult) *
              transform(n, g, fv, kTwoPi * std::sqrt(static_cast<double>(sq)));
    }
  }
  out.translate_side = translate;
  out.tail_estimate = std::abs(tail);
  out.relative_discrepancy =
      std::abs(out.lattice_side - out.translate_side) / std::abs(out.lattice_side);
  return out;
}

}  // namespace clusterlab
