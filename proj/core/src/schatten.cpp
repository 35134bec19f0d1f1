#include "clusterlab/schatten.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "clusterlab/errors.hpp"

namespace clusterlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kDenseBoxCap = std::size_t{1} << 22;

double grid_integral(const std::vector<std::complex<double>>& vals, int dim, int m,
                     const std::function<double(std::complex<double>)>& f) {
  long double s = 0.0L;
  for (const auto& v : vals) s += f(v);
  return static_cast<double>(s) * std::pow(kTwoPi / m, dim);
}

}  // namespace

TestFunction::TestFunction(int dim, std::vector<Frequency> freqs,
                           std::vector<std::complex<double>> coeffs) {
  if (dim < 1 || dim > kMaxDimension) throw InvalidConfigError("test function dimension out of range");
  if (freqs.size() != coeffs.size()) throw ShapeError("frequencies and coefficients differ in length");
  poly_.dim = dim;
  poly_.freqs = std::move(freqs);
  poly_.coeffs = std::move(coeffs);
  for (const auto& c : poly_.coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("test function coefficients must be finite");
    }
  }

  std::map<Frequency, std::complex<double>> w;
  for (std::size_t a = 0; a < poly_.freqs.size(); ++a) {
    for (std::size_t b = 0; b < poly_.freqs.size(); ++b) {
      Frequency d{};
      for (int i = 0; i < dim; ++i) d[i] = poly_.freqs[a][i] - poly_.freqs[b][i];
      w[d] += poly_.coeffs[a] * std::conj(poly_.coeffs[b]);
    }
  }
  abs_sq_.dim = dim;
  for (const auto& [d, v] : w) {
    abs_sq_.freqs.push_back(d);
    abs_sq_.coeffs.push_back(v);
  }

  box_radius_ = abs_sq_.max_component();
  long double cells = 1.0L;
  for (int i = 0; i < dim; ++i) cells *= static_cast<long double>(2 * box_radius_ + 1);
  if (cells <= static_cast<long double>(kDenseBoxCap)) {
    box_.assign(static_cast<std::size_t>(cells), 0.0);
    for (std::size_t j = 0; j < abs_sq_.freqs.size(); ++j) {
      std::size_t idx = 0;
      for (int i = 0; i < dim; ++i) {
        idx = idx * static_cast<std::size_t>(2 * box_radius_ + 1) +
              static_cast<std::size_t>(abs_sq_.freqs[j][i] + box_radius_);
      }
      box_[idx] = abs_sq_.coeffs[j];
    }
  }
}

TestFunction TestFunction::constant(int dim, std::complex<double> value) {
  return TestFunction(dim, {Frequency{}}, {value});
}

std::complex<double> TestFunction::abs_sq_coefficient(const Frequency& delta) const {
  const int n = poly_.dim;
  for (int i = 0; i < n; ++i) {
    if (delta[i] > box_radius_ || delta[i] < -box_radius_) return 0.0;
  }
  if (!box_.empty()) {
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      idx = idx * static_cast<std::size_t>(2 * box_radius_ + 1) +
            static_cast<std::size_t>(delta[i] + box_radius_);
    }
    return box_[idx];
  }
  const auto it = std::lower_bound(abs_sq_.freqs.begin(), abs_sq_.freqs.end(), delta);
  if (it == abs_sq_.freqs.end() || *it != delta) return 0.0;
  return abs_sq_.coeffs[static_cast<std::size_t>(it - abs_sq_.freqs.begin())];
}

double TestFunction::l2_norm_sq() const {
  double s = 0.0;
  for (const auto& c : poly_.coeffs) s += std::norm(c);
  return std::pow(kTwoPi, poly_.dim) * s;
}

double TestFunction::l2_norm_sq_grid() const {
  const int m = next_pow2(std::max<std::int64_t>(2 * poly_.max_component() + 1, 4));
  const auto vals = evaluate_on_grid(poly_, m);
  return grid_integral(vals, poly_.dim, m, [](std::complex<double> v) { return std::norm(v); });
}

double TestFunction::lq_norm(double q) const {
  if (!(q >= 1.0)) throw DomainError("L^q norm requires q >= 1");
  const std::int64_t band = poly_.max_component();
  const double qr = std::round(q);
  const bool even = std::abs(q - qr) < 1e-12 && static_cast<std::int64_t>(qr) % 2 == 0;
  const std::int64_t need = even ? static_cast<std::int64_t>(qr) * band + 1
                                 : static_cast<std::int64_t>(std::ceil(8.0 * q * band)) + 64;
  const int m = next_pow2(std::max<std::int64_t>(need, 4));
  const auto vals = evaluate_on_grid(poly_, m);
  const double integral =
      grid_integral(vals, poly_.dim, m, [q](std::complex<double> v) { return std::pow(std::abs(v), q); });
  return std::pow(integral, 1.0 / q);
}

TestFunction random_test_function(int dim, int modes, int max_freq, std::uint64_t seed) {
  if (modes < 1) throw InvalidConfigError("test function needs at least one mode");
  const long double box = std::pow(2.0L * max_freq + 1.0L, dim);
  if (static_cast<long double>(modes) > box) {
    throw InvalidConfigError("more modes requested than frequencies available");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(-max_freq, max_freq);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::set<Frequency> chosen;
  std::vector<Frequency> freqs;
  while (static_cast<int>(freqs.size()) < modes) {
    Frequency f{};
    for (int i = 0; i < dim; ++i) f[i] = coord(rng);
    if (chosen.insert(f).second) freqs.push_back(f);
  }
  std::vector<std::complex<double>> coeffs(freqs.size());
  for (auto& c : coeffs) {
    const double re = normal(rng);
    const double im = normal(rng);
    c = {re, im};
  }
  return TestFunction(dim, std::move(freqs), std::move(coeffs));
}

struct GramMatrix::Cache {
  std::once_flag dense_once;
  std::once_flag eigen_once;
  Eigen::MatrixXcd matrix;
  std::vector<double> eigenvalues;
  std::exception_ptr eigen_error;
};

GramMatrix::GramMatrix(ClusterPtr cluster, TestFunction h, std::int64_t cap)
    : cluster_(std::move(cluster)), h_(std::move(h)), cap_(cap), cache_(std::make_shared<Cache>()) {
  if (!cluster_) throw ValidationError("Gram matrix needs a cluster");
  if (cluster_->config().dim() != h_.dim()) {
    throw ShapeError("test function and torus dimensions differ");
  }
}

const Eigen::MatrixXcd& GramMatrix::matrix() const {
  if (!is_dense()) {
    throw CapacityError("cluster has " + std::to_string(size()) +
                        " frequencies, dense Gram matrix cap is " + std::to_string(cap_));
  }
  std::call_once(cache_->dense_once, [this] {
    const auto& c = *cluster_;
    const int n = c.config().dim();
    const auto count = static_cast<Eigen::Index>(c.size());
    Eigen::MatrixXcd g(count, count);
    for (Eigen::Index j = 0; j < count; ++j) {
      for (Eigen::Index i = j; i < count; ++i) {
        Frequency d{};
        for (int a = 0; a < n; ++a) {
          d[a] = c[static_cast<std::size_t>(i)].k[a] - c[static_cast<std::size_t>(j)].k[a];
        }
        const std::complex<double> v = h_.abs_sq_coefficient(d);
        g(i, j) = v;
        g(j, i) = std::conj(v);
      }
      g(j, j) = g(j, j).real();
    }
    cache_->matrix = std::move(g);
  });
  return cache_->matrix;
}

const std::vector<double>& GramMatrix::eigenvalues() const {
  const Eigen::MatrixXcd& g = matrix();
  std::call_once(cache_->eigen_once, [&] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      cache_->eigen_error =
          std::make_exception_ptr(NumericError("Hermitian eigensolver did not converge"));
      return;
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();
    cache_->eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(cache_->eigenvalues.begin(), cache_->eigenvalues.end(), std::greater<>());
  });
  if (cache_->eigen_error) std::rethrow_exception(cache_->eigen_error);
  return cache_->eigenvalues;
}

double GramMatrix::trace() const {
  return static_cast<double>(size()) * h_.abs_sq_coefficient(Frequency{}).real();
}

double GramMatrix::frobenius() const {
  const auto& c = *cluster_;
  const int n = c.config().dim();
  long double s = 0.0L;
  for (std::size_t j = 0; j < c.size(); ++j) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      Frequency d{};
      for (int a = 0; a < n; ++a) d[a] = c[i].k[a] - c[j].k[a];
      s += std::norm(h_.abs_sq_coefficient(d));
    }
  }
  return std::sqrt(static_cast<double>(s));
}

GramMatrix gram_matrix(ClusterPtr cluster, const TestFunction& h, std::int64_t cap) {
  if (!cluster) throw ValidationError("Gram matrix needs a cluster");
  if (static_cast<std::int64_t>(cluster->size()) > cap) {
    throw CapacityError("cluster has " + std::to_string(cluster->size()) +
                        " frequencies, dense Gram matrix cap is " + std::to_string(cap));
  }
  return GramMatrix(std::move(cluster), h, cap);
}

SchattenReport schatten_norm(const GramMatrix& g, LpExponent alpha) {
  if (!alpha.is_infinite() && alpha.value() < 1.0) throw DomainError("Schatten exponent must be >= 1");
  const auto& c = g.cluster();
  SchattenReport rep;
  rep.alpha = alpha;
  rep.n = c.config().dim();
  rep.lambda = c.band().lambda();
  rep.epsilon = c.band().epsilon();

  if (!alpha.is_infinite() && alpha.value() == 1.0) {
    rep.norm = g.trace();
  } else if (!alpha.is_infinite() && alpha.value() == 2.0) {
    rep.norm = g.frobenius();
  } else {
    const auto& ev = g.eigenvalues();
    if (alpha.is_infinite()) {
      for (double v : ev) rep.norm = std::max(rep.norm, std::abs(v));
    } else {
      long double s = 0.0L;
      for (double v : ev) s += std::pow(std::abs(v), alpha.value());
      rep.norm = std::pow(static_cast<double>(s), 1.0 / alpha.value());
    }
  }

  const int n = rep.n;
  if (!alpha.is_infinite() && alpha.value() == 1.0) {
    rep.bound_rhs = std::pow(rep.lambda, n - 1) * rep.epsilon * g.test_function().l2_norm_sq();
  } else if (!alpha.is_infinite() && alpha.value() == n + 1.0) {
    const double hq = g.test_function().lq_norm(n + 1.0);
    rep.bound_rhs = std::pow(rep.lambda, (n - 1.0) / (n + 1.0)) * hq * hq;
  }
  rep.ratio = rep.bound_rhs > 0.0 ? rep.norm / rep.bound_rhs : 0.0;
  return rep;
}

Theorem23Result theorem23_check(const TorusConfig& cfg, double lambda, double eps,
                                const TestFunction& h) {
  const SpectralBand band(lambda, eps);
  Theorem23Result out;
  out.count = count_band(cfg, band);
  out.empty = out.count == 0;
  const int n = cfg.dim();
  const double h2 = h.l2_norm_sq();
  out.trace_norm = static_cast<double>(out.count) * h2 / std::pow(kTwoPi, n);
  out.rhs = (eps * std::pow(lambda, n - 1) + std::pow(lambda / eps, 0.5 * (n - 1))) * h2;
  out.ratio = out.rhs > 0.0 ? out.trace_norm / out.rhs : 0.0;
  return out;
}

DualPairing dual_pairing_check(const ClusterSubspace& r, std::span<const double> zeta,
                               const TestFunction& h, LpExponent alpha) {
  if (static_cast<Eigen::Index>(zeta.size()) != r.dim()) {
    throw ShapeError("zeta has length " + std::to_string(zeta.size()) + ", subspace has dimension " +
                     std::to_string(r.dim()));
  }
  if (!alpha.is_infinite() && alpha.value() < 1.0) throw DomainError("duality exponent must be >= 1");
  DualPairing out;
  out.alpha = alpha;
  out.alpha_dual = alpha.is_infinite()
                       ? LpExponent(1.0)
                       : (alpha.value() == 1.0 ? LpExponent::infinity()
                                               : LpExponent(alpha.value() / (alpha.value() - 1.0)));

  std::vector<double> mod(zeta.size());
  for (std::size_t j = 0; j < zeta.size(); ++j) mod[j] = std::abs(zeta[j]);
  const TrigPolynomial rho = density(r, std::span<const double>(mod)).fourier();
  const TrigPolynomial& h2 = h.abs_sq();
  const int n = h.dim();
  const int m = next_pow2(std::max<std::int64_t>(rho.max_component() + h2.max_component() + 1, 4));
  const auto rv = evaluate_on_grid(rho, m);
  const auto hv = evaluate_on_grid(h2, m);
  long double s = 0.0L;
  for (std::size_t i = 0; i < rv.size(); ++i) s += rv[i].real() * hv[i].real();
  out.lhs = static_cast<double>(s) * std::pow(kTwoPi / m, n);

  const GramMatrix g(r.cluster_ptr(), h);
  const double schatten = schatten_norm(g, out.alpha_dual).norm;
  double zn = 0.0;
  if (alpha.is_infinite()) {
    for (double v : mod) zn = std::max(zn, v);
  } else {
    long double t = 0.0L;
    for (double v : mod) t += std::pow(v, alpha.value());
    zn = std::pow(static_cast<double>(t), 1.0 / alpha.value());
  }
  out.rhs = schatten * zn;
  out.slack = out.rhs - out.lhs;
  return out;
}

ClusterSubspace top_eigenvector_subspace(const GramMatrix& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g.matrix());
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");
  const Eigen::Index top = solver.eigenvalues().size() - 1;
  Eigen::MatrixXcd b = solver.eigenvectors().col(top);
  b /= b.norm();
  return make_subspace(g.cluster_ptr(), std::move(b));
}

OpineReport opine_chain_check(const TorusConfig& cfg, double lambda, double eps,
                              const std::function<double(double)>& profile, double window,
                              const TestFunction& h) {
  const SpectralBand band(lambda, eps);
  OpineReport out;
  out.l_lo = static_cast<std::int64_t>(std::floor(std::max(0.0, lambda - window)));
  out.l_hi = static_cast<std::int64_t>(std::ceil(lambda + window));
  const std::int64_t m_lo = out.l_lo * out.l_lo;
  const std::int64_t m_hi = (out.l_hi + 1) * (out.l_hi + 1) - 1;
  const auto hist = shell_histogram(cfg, m_lo, m_hi);

  const double unit = h.l2_norm_sq() / std::pow(kTwoPi, cfg.dim());
  long double lhs = 0.0L;
  std::vector<long double> per_band(static_cast<std::size_t>(out.l_hi - out.l_lo + 1), 0.0L);
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (hist[i] == 0) continue;
    const std::int64_t sq = m_lo + static_cast<std::int64_t>(i);
    const double mu = std::sqrt(static_cast<double>(sq));
    lhs += static_cast<long double>(hist[i]) * profile((mu - lambda) / eps);
    // unit band [l, l + 1) containing mu: l = isqrt(sq)
    auto l = static_cast<std::int64_t>(mu);
    while (l * l > sq) --l;
    while ((l + 1) * (l + 1) <= sq) ++l;
    per_band[static_cast<std::size_t>(l - out.l_lo)] += static_cast<long double>(hist[i]);
  }
  long double rhs = 0.0L;
  for (std::size_t j = 0; j < per_band.size(); ++j) {
    const double l = static_cast<double>(out.l_lo + static_cast<std::int64_t>(j));
    const double w = 1.0 + std::abs(l - lambda) / eps;
    rhs += per_band[j] / (w * w);
  }
  out.lhs = static_cast<double>(lhs) * unit;
  out.rhs_sum = static_cast<double>(rhs) * unit;
  out.constant = out.rhs_sum > 0.0 ? out.lhs / out.rhs_sum : 0.0;
  return out;
}

OpineReport opine_chain_check(const TorusConfig& cfg, double lambda, double eps,
                              const Mollifier& m, const TestFunction& h) {
  // b < 1e-14 once a < 1e-7
  const double window = eps * m.decay_radius(1e-7);
  return opine_chain_check(cfg, lambda, eps, [&m](double t) { return m.b(t); }, window, h);
}

}  // namespace clusterlab
