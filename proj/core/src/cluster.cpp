#include "clusterlab/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "clusterlab/errors.hpp"

namespace clusterlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kDenseBoxCap = std::size_t{1} << 24;
constexpr std::size_t kSupGridCap = std::size_t{1} << 22;

double torus_volume(int n) { return std::pow(kTwoPi, n); }

std::vector<std::complex<double>> phases(const SpectralCluster& c, std::span<const double> x) {
  const int n = c.config().dim();
  std::vector<std::complex<double>> v(c.size());
  for (std::size_t a = 0; a < c.size(); ++a) {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += c[a].k[i] * x[i];
    v[a] = {std::cos(t), std::sin(t)};
  }
  return v;
}

void check_point(const SpectralCluster& c, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(c.config().dim())) {
    throw ShapeError("point has " + std::to_string(x.size()) + " coordinates, torus has dimension " +
                     std::to_string(c.config().dim()));
  }
}

std::int64_t max_abs_component(const SpectralCluster& c) {
  std::int64_t r = 0;
  for (const auto& f : c.freqs()) {
    for (int i = 0; i < c.config().dim(); ++i) r = std::max<std::int64_t>(r, std::abs(f.k[i]));
  }
  return r;
}

}  // namespace

ClusterSubspace make_subspace(ClusterPtr cluster, Eigen::MatrixXcd basis, double tol) {
  if (!cluster) throw ValidationError("subspace needs a cluster");
  const auto n = static_cast<Eigen::Index>(cluster->size());
  if (basis.rows() != n) {
    throw ShapeError("basis has " + std::to_string(basis.rows()) + " rows, cluster has " +
                     std::to_string(n) + " frequencies");
  }
  if (basis.cols() < 1 || basis.cols() > n) {
    throw ValidationError("subspace dimension must lie in [1, " + std::to_string(n) + "], got " +
                          std::to_string(basis.cols()));
  }
  if (!basis.allFinite()) throw ValidationError("basis has non-finite entries");

  const Eigen::MatrixXcd gram = basis.adjoint() * basis;
  Eigen::Index wi = 0;
  Eigen::Index wj = 0;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j) {
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
      const double dev = std::abs(gram(i, j) - (i == j ? 1.0 : 0.0));
      if (dev > worst) {
        worst = dev;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst > tol) {
    std::ostringstream msg;
    msg << "basis is not orthonormal: Gram entry (" << wi << ", " << wj << ") = " << gram(wi, wj)
        << " deviates by " << worst << " > " << tol;
    throw ValidationError(msg.str());
  }
  return ClusterSubspace(std::move(cluster), std::move(basis));
}

Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  const Eigen::MatrixXcd& r = qr.matrixQR();
  // fix column phases so the factorisation is unique (Haar measure for Gaussian input)
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const std::complex<double> d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = {re, im};
    }
  }
  return m;
}

Eigen::MatrixXcd random_unitary(Eigen::Index d, std::uint64_t seed) {
  if (d < 1) throw ValidationError("unitary size must be positive");
  return orthonormalize(gaussian_matrix(d, d, seed));
}

ClusterSubspace random_subspace(ClusterPtr cluster, Eigen::Index d, std::uint64_t seed) {
  if (!cluster) throw ValidationError("subspace needs a cluster");
  const auto n = static_cast<Eigen::Index>(cluster->size());
  if (d < 1 || d > n) {
    throw ValidationError("subspace dimension must lie in [1, " + std::to_string(n) + "], got " +
                          std::to_string(d));
  }
  Eigen::MatrixXcd b = orthonormalize(gaussian_matrix(n, d, seed));
  return make_subspace(std::move(cluster), std::move(b));
}

ClusterSubspace full_subspace(ClusterPtr cluster) {
  if (!cluster) throw ValidationError("subspace needs a cluster");
  const auto n = static_cast<Eigen::Index>(cluster->size());
  return make_subspace(std::move(cluster), Eigen::MatrixXcd::Identity(n, n));
}

DensityFunction::DensityFunction(ClusterPtr cluster, Eigen::MatrixXcd projector, bool real_weights,
                                 bool nonnegative_weights)
    : cluster_(std::move(cluster)),
      projector_(std::move(projector)),
      real_(real_weights),
      nonnegative_(nonnegative_weights) {
  const auto n = static_cast<Eigen::Index>(cluster_->size());
  if (projector_.rows() != n || projector_.cols() != n) {
    throw ShapeError("density matrix does not match the cluster size");
  }
}

std::complex<double> DensityFunction::value(std::span<const double> x) const {
  check_point(*cluster_, x);
  const auto v = phases(*cluster_, x);
  const Eigen::Map<const Eigen::VectorXcd> vv(v.data(), static_cast<Eigen::Index>(v.size()));
  const std::complex<double> s = vv.transpose() * projector_ * vv.conjugate();
  return s / torus_volume(cluster_->config().dim());
}

TrigPolynomial DensityFunction::fourier() const {
  const int n = cluster_->config().dim();
  const auto& c = *cluster_;
  const double scale = 1.0 / torus_volume(n);
  TrigPolynomial poly;
  poly.dim = n;

  const std::int64_t r = max_abs_component(c);
  const std::int64_t side = 4 * r + 1;
  long double box = 1.0L;
  for (int i = 0; i < n; ++i) box *= static_cast<long double>(side);

  auto offset_of = [&](const Frequency& d) {
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(d[i] + 2 * r);
    return idx;
  };
  auto diff = [&](std::size_t a, std::size_t b) {
    Frequency d{};
    for (int i = 0; i < n; ++i) d[i] = c[a].k[i] - c[b].k[i];
    return d;
  };

  if (box <= static_cast<long double>(kDenseBoxCap)) {
    std::vector<std::complex<double>> acc(static_cast<std::size_t>(box), 0.0);
    std::vector<char> used(acc.size(), 0);
    for (std::size_t b = 0; b < c.size(); ++b) {
      for (std::size_t a = 0; a < c.size(); ++a) {
        const auto p = projector_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (p == 0.0) continue;
        const std::size_t idx = offset_of(diff(a, b));
        acc[idx] += p;
        used[idx] = 1;
      }
    }
    for (std::size_t idx = 0; idx < acc.size(); ++idx) {
      if (!used[idx]) continue;
      Frequency d{};
      std::size_t rest = idx;
      for (int i = n - 1; i >= 0; --i) {
        d[i] = static_cast<std::int32_t>(static_cast<std::int64_t>(rest % side) - 2 * r);
        rest /= static_cast<std::size_t>(side);
      }
      poly.freqs.push_back(d);
      poly.coeffs.push_back(acc[idx] * scale);
    }
    return poly;
  }

  std::map<Frequency, std::complex<double>> acc;
  for (std::size_t b = 0; b < c.size(); ++b) {
    for (std::size_t a = 0; a < c.size(); ++a) {
      const auto p = projector_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (p != 0.0) acc[diff(a, b)] += p;
    }
  }
  for (const auto& [d, v] : acc) {
    poly.freqs.push_back(d);
    poly.coeffs.push_back(v * scale);
  }
  return poly;
}

DensityFunction density(const ClusterSubspace& subspace,
                        std::optional<std::span<const std::complex<double>>> weights) {
  const Eigen::MatrixXcd& b = subspace.basis();
  const Eigen::Index d = b.cols();
  Eigen::VectorXcd zeta = Eigen::VectorXcd::Ones(d);
  if (weights) {
    if (static_cast<Eigen::Index>(weights->size()) != d) {
      throw ShapeError("weights have length " + std::to_string(weights->size()) +
                       ", subspace has dimension " + std::to_string(d));
    }
    for (Eigen::Index j = 0; j < d; ++j) zeta(j) = (*weights)[static_cast<std::size_t>(j)];
    if (!zeta.allFinite()) throw DomainError("weights must be finite");
  }
  const bool real = (zeta.imag().array() == 0.0).all();
  const bool nonneg = real && (zeta.real().array() >= 0.0).all();
  Eigen::MatrixXcd p = b * zeta.asDiagonal() * b.adjoint();
  return DensityFunction(subspace.cluster_ptr(), std::move(p), real, nonneg);
}

DensityFunction density(const ClusterSubspace& subspace, std::span<const double> weights) {
  std::vector<std::complex<double>> w(weights.begin(), weights.end());
  return density(subspace, std::span<const std::complex<double>>(w));
}

std::complex<double> direct_density(const ClusterSubspace& subspace,
                                    std::span<const std::complex<double>> weights,
                                    std::span<const double> x) {
  const auto& c = subspace.cluster();
  check_point(c, x);
  const Eigen::MatrixXcd& b = subspace.basis();
  if (static_cast<Eigen::Index>(weights.size()) != b.cols()) {
    throw ShapeError("weights do not match the subspace dimension");
  }
  const auto v = phases(c, x);
  const double norm = std::pow(kTwoPi, -0.5 * c.config().dim());
  std::complex<double> sum = 0.0;
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    std::complex<double> g = 0.0;
    for (Eigen::Index a = 0; a < b.rows(); ++a) g += b(a, j) * v[static_cast<std::size_t>(a)];
    g *= norm;
    sum += weights[static_cast<std::size_t>(j)] * std::norm(g);
  }
  return sum;
}

namespace {

int base_grid(const DensityFunction& rho) {
  const auto& band = rho.cluster().band();
  return next_pow2(static_cast<std::int64_t>(std::ceil(4.0 * band.upper())) + 1);
}

int fit_grid(int dim, int m, std::size_t cap) {
  while (m > 2) {
    long double pts = 1.0L;
    for (int i = 0; i < dim; ++i) pts *= m;
    if (pts <= static_cast<long double>(cap)) break;
    m /= 2;
  }
  return m;
}

double grid_power_sum(const TrigPolynomial& poly, int m, double q) {
  const auto vals = evaluate_on_grid(poly, m);
  long double s = 0.0L;
  for (const auto& v : vals) s += std::pow(std::abs(v), q);
  return static_cast<double>(s) * std::pow(kTwoPi / m, poly.dim);
}

NormEstimate finite_norm(const DensityFunction& rho, double q) {
  const TrigPolynomial poly = rho.fourier();
  const int n = poly.dim;
  const std::int64_t band = poly.max_component();
  NormEstimate out;
  int m = base_grid(rho);

  const double qr = std::round(q);
  const bool integral_q = std::abs(q - qr) < 1e-12;
  const bool polynomial_power =
      integral_q && (static_cast<std::int64_t>(qr) % 2 == 0 || rho.is_nonnegative());
  if (polynomial_power) {
    const int m_exact = next_pow2(static_cast<std::int64_t>(qr) * band + 1);
    if (fit_grid(n, m_exact, kMaxGridPoints) == m_exact) {
      m = std::max(m, m_exact);
      out.exact = true;
    }
  } else {
    m = std::max(m, next_pow2(static_cast<std::int64_t>(std::ceil(q * band)) + 1));
  }
  m = fit_grid(n, m, kMaxGridPoints);
  out.grid = m;

  const double integral = grid_power_sum(poly, m, q);
  const double coarse = grid_power_sum(poly, std::max(2, m / 2), q);
  out.value = std::pow(integral, 1.0 / q);
  out.error_estimate = out.exact ? 0.0 : std::abs(out.value - std::pow(coarse, 1.0 / q));
  out.lower = out.upper = out.value;
  return out;
}

struct Cell {
  std::array<double, kMaxDimension> x{};
  double half = 0.0;  // half side length
  double bound = 0.0;
};

NormEstimate sup_norm(const DensityFunction& rho, const SupOptions& opt) {
  const TrigPolynomial full = rho.fourier();
  const int n = full.dim;
  NormEstimate out;

  // split off negligible coefficients; their total mass is added to the bracket
  double cmax = 0.0;
  for (const auto& c : full.coeffs) cmax = std::max(cmax, std::abs(c));
  TrigPolynomial main;
  main.dim = n;
  double small = 0.0;
  for (std::size_t j = 0; j < full.coeffs.size(); ++j) {
    if (std::abs(full.coeffs[j]) <= 1e-13 * cmax) {
      small += std::abs(full.coeffs[j]);
    } else {
      main.freqs.push_back(full.freqs[j]);
      main.coeffs.push_back(full.coeffs[j]);
    }
  }

  const double big_d = main.max_norm();
  if (big_d == 0.0) {
    const double c0 = main.coeffs.empty() ? 0.0 : std::abs(main.coeffs[0]);
    out.lower = std::max(0.0, c0 - small);
    out.upper = c0 + small;
    out.value = c0;
    out.grid = 1;
    return out;
  }

  const bool real = rho.is_real();
  const std::int64_t band = main.max_component();
  int m = base_grid(rho);
  m = std::max(m, next_pow2(2 * band + 1));
  m = std::max(m, next_pow2(static_cast<std::int64_t>(std::ceil(kTwoPi * std::sqrt(n) * big_d))));
  m = fit_grid(n, m, kSupGridCap);
  out.grid = m;

  const auto vals = evaluate_on_grid(main, m);
  std::vector<std::vector<std::complex<double>>> grads;
  if (real) {
    for (int i = 0; i < n; ++i) {
      TrigPolynomial g = main;
      for (std::size_t j = 0; j < g.coeffs.size(); ++j) {
        g.coeffs[j] *= std::complex<double>(0.0, g.freqs[j][i]);
      }
      grads.push_back(evaluate_on_grid(g, m));
    }
  }

  auto magnitude = [&](std::complex<double> v) { return real ? std::abs(v.real()) : std::abs(v); };
  double best = 0.0;
  for (const auto& v : vals) best = std::max(best, magnitude(v));

  const double d0 = std::numbers::pi / m * std::sqrt(static_cast<double>(n));
  double u = main.coefficient_l1();
  if (real && big_d * big_d * d0 * d0 / 2.0 < 1.0) {
    u = std::min(u, best / (1.0 - big_d * big_d * d0 * d0 / 2.0));
  } else if (!real && big_d * d0 < 1.0) {
    u = std::min(u, best / (1.0 - big_d * d0));
  }

  // sup over a cell of radius r around a point with value v and gradient g
  auto cell_bound = [&](double v, double grad_norm, double r) {
    return real ? v + r * grad_norm + 0.5 * r * r * big_d * big_d * u : v + r * big_d * u;
  };

  const double tol = opt.rel_width * best;
  double settled = best;  // largest bound among cells already ruled out
  std::vector<Cell> live;
  std::vector<double> x(static_cast<std::size_t>(n));
  const double h0 = std::numbers::pi / m;
  for (std::size_t idx = 0; idx < vals.size(); ++idx) {
    double gn = 0.0;
    if (real) {
      for (int i = 0; i < n; ++i) gn += std::norm(grads[i][idx].real());
      gn = std::sqrt(gn);
    }
    const double b = cell_bound(magnitude(vals[idx]), gn, d0);
    if (b <= best + tol) {
      settled = std::max(settled, b);
      continue;
    }
    Cell c;
    grid_point(idx, n, m, x);
    std::copy(x.begin(), x.end(), c.x.begin());
    c.half = h0;
    c.bound = b;
    live.push_back(c);
  }
  grads.clear();

  std::size_t evaluations = 0;
  std::vector<double> grad(static_cast<std::size_t>(n));
  const std::size_t children = std::size_t{1} << n;
  while (!live.empty() && evaluations < opt.max_evaluations) {
    std::vector<Cell> next;
    for (std::size_t ci = 0; ci < live.size(); ++ci) {
      const Cell& parent = live[ci];
      if (parent.bound <= best + tol) {
        settled = std::max(settled, parent.bound);
        continue;
      }
      if (evaluations >= opt.max_evaluations) {
        next.insert(next.end(), live.begin() + static_cast<std::ptrdiff_t>(ci), live.end());
        break;
      }
      const double h = parent.half / 2.0;
      const double r = h * std::sqrt(static_cast<double>(n));
      for (std::size_t mask = 0; mask < children; ++mask) {
        Cell c;
        c.half = h;
        for (int i = 0; i < n; ++i) c.x[i] = parent.x[i] + ((mask >> i) & 1U ? h : -h);
        const std::span<const double> pt(c.x.data(), static_cast<std::size_t>(n));
        double v = 0.0;
        double gn = 0.0;
        if (real) {
          v = std::abs(main.real_value_and_gradient(pt, grad));
          for (int i = 0; i < n; ++i) gn += grad[i] * grad[i];
          gn = std::sqrt(gn);
        } else {
          v = std::abs(main(pt));
        }
        ++evaluations;
        best = std::max(best, v);
        c.bound = cell_bound(v, gn, r);
        next.push_back(c);
      }
    }
    live = std::move(next);
  }

  double upper = std::max(settled, best);
  for (const auto& c : live) upper = std::max(upper, c.bound);
  out.converged = live.empty();
  out.lower = std::max(0.0, best - small);
  out.upper = upper + small;
  out.value = 0.5 * (out.lower + out.upper);
  return out;
}

}  // namespace

NormEstimate lp_norm(const DensityFunction& rho, LpExponent q, const SupOptions& options) {
  if (!q.is_infinite() && q.value() < 1.0) throw DomainError("L^q norm requires q >= 1");
  if (rho.cluster().empty()) return NormEstimate{};
  return q.is_infinite() ? sup_norm(rho, options) : finite_norm(rho, q.value());
}

Theorem1Result theorem1_ratio(const TorusConfig& cfg, double lambda, const EpsRule& rule) {
  Theorem1Result out;
  out.lambda = lambda;
  out.epsilon = rule.apply(cfg.dim(), lambda);
  const SpectralBand band(lambda, out.epsilon);
  out.count = count_band(cfg, band);
  out.empty = out.count == 0;
  out.sup_density = static_cast<double>(out.count) / torus_volume(cfg.dim());
  out.ratio = out.sup_density / (std::pow(lambda, cfg.dim() - 1) * out.epsilon);
  return out;
}

}  // namespace clusterlab
