// Acceptance suite: one PASS/FAIL line per criterion, pinned tolerances.
// Exit status is the number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clusterlab/cluster.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/experiments.hpp"
#include "clusterlab/exponents.hpp"
#include "clusterlab/kernels.hpp"
#include "clusterlab/lattice.hpp"
#include "clusterlab/mollifier.hpp"
#include "clusterlab/parallel.hpp"
#include "clusterlab/schatten.hpp"

using namespace clusterlab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ClusterPtr make_cluster(int n, double lambda, double eps) {
  return std::make_shared<const SpectralCluster>(enumerate_band(TorusConfig(n), SpectralBand(lambda, eps)));
}

std::vector<double> geometric(double lo, double hi, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  }
  return g;
}

// ---------------------------------------------------------------------------

Outcome oracle_equality() {
  int cases = 0;
  int mismatches = 0;
  std::int64_t points = 0;
  for (int n : {2, 3}) {
    for (double lambda : {5.0, 10.0, 20.0, 40.0}) {
      for (double eps : {0.01, 0.1, 0.5, 1.0}) {
        const TorusConfig cfg(n);
        const SpectralBand band(lambda, eps);
        const auto fast = enumerate_band(cfg, band);
        const auto slow = brute_force_band_oracle(cfg, band);
        ++cases;
        points += static_cast<std::int64_t>(fast.size());
        if (!(fast == slow) || count_band(cfg, band) != static_cast<std::int64_t>(slow.size())) ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(cases) + " bands, " + std::to_string(points) +
                               " points, mismatches " + std::to_string(mismatches)};
}

SweepResult counts_sweep(int n, double lo, double hi) {
  SweepSpec s;
  s.n = n;
  s.mode = SweepMode::Counts;
  s.lambda_min = lo;
  s.lambda_max = hi;
  s.points = 20;
  s.eps = EpsRule::shrink();
  s.jobs = 0;
  return run_sweep(s);
}

Outcome band_count_scaling(const SweepResult& two, const SweepResult& three) {
  const double target2 = 2.0 / 3.0;
  const double target3 = 1.5;
  const bool ok2 = two.fit.slope_defined && std::abs(two.fit.slope - target2) <= 0.1 &&
                   std::isfinite(two.ratio_fit.C) && two.ratio_fit.slope <= 0.05;
  const bool ok3 = three.fit.slope_defined && std::abs(three.fit.slope - target3) <= 0.1 &&
                   std::isfinite(three.ratio_fit.C) && three.ratio_fit.slope <= 0.05;
  return {ok2 && ok3 && two.failures == 0 && three.failures == 0,
          "n=2 slope " + num(two.fit.slope) + " (target 0.6667 +- 0.1), C " + num(two.ratio_fit.C) +
              ", ratio slope " + num(two.ratio_fit.slope) + "; n=3 slope " + num(three.fit.slope) +
              " (target 1.5 +- 0.1), C " + num(three.ratio_fit.C) + ", ratio slope " +
              num(three.ratio_fit.slope)};
}

Outcome full_cluster_lower_bound(const SweepResult& two) {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& r : two.rows) {
    if (r.ok) c = std::min(c, r.ratio);
  }
  const bool ok = c > 0.0 && std::isfinite(c) && two.ratio_fit.slope_defined &&
                  std::abs(two.ratio_fit.slope) <= 0.05;
  return {ok, "n=2 min ratio c " + num(c) + ", ratio slope " + num(two.ratio_fit.slope) + " (|.| <= 0.05)"};
}

Outcome basis_independence() {
  constexpr int kTrials = 100;
  constexpr int kPoints = 1000;
  std::vector<double> worst(kTrials, 0.0);
  parallel_for(kTrials, 0, [&](std::size_t t) {
    std::mt19937_64 rng(1000 + t);
    const int n = t % 2 == 0 ? 2 : 3;
    std::uniform_real_distribution<double> lam(n == 2 ? 5.0 : 3.0, n == 2 ? 30.0 : 12.0);
    std::uniform_real_distribution<double> wid(0.1, 1.0);
    ClusterPtr c;
    do {
      c = make_cluster(n, lam(rng), wid(rng));
    } while (c->size() < 2);
    const auto N = static_cast<Eigen::Index>(c->size());
    const Eigen::Index d = std::max<Eigen::Index>(1, std::min<Eigen::Index>(N, 1 + static_cast<Eigen::Index>(rng() % 16)));
    const auto r = random_subspace(c, d, rng());
    const auto rotated = make_subspace(c, r.basis() * random_unitary(d, rng()));
    const std::vector<std::complex<double>> ones(static_cast<std::size_t>(d), 1.0);
    const bool projector = n == 2;
    const auto rho = density(r);
    std::uniform_real_distribution<double> coord(0.0, kTwoPi);
    std::vector<double> x(static_cast<std::size_t>(n));
    double w = 0.0;
    for (int p = 0; p < kPoints; ++p) {
      for (auto& v : x) v = coord(rng);
      const auto a = direct_density(r, ones, x);
      const auto b = direct_density(rotated, ones, x);
      w = std::max(w, std::abs(a - b));
      if (projector) w = std::max(w, std::abs(rho.value(x) - a));
    }
    worst[t] = w;
  });
  const double w = *std::max_element(worst.begin(), worst.end());
  return {w <= 1e-10, std::to_string(kTrials) + " trials x " + std::to_string(kPoints) +
                          " points, max discrepancy " + num(w) + " (<= 1e-10)"};
}

Outcome trace_identity() {
  struct Case {
    int n;
    double lambda;
  };
  const std::vector<Case> cases{{2, 10.0}, {2, 20.0}, {3, 10.0}, {3, 20.0}};
  constexpr int kSeeds = 50;
  std::vector<double> err(cases.size() * kSeeds, 0.0);
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto [n, lambda] = cases[ci];
    const double eps = std::min(1.0, shrink_rate(n, lambda));
    const auto c = make_cluster(n, lambda, eps);
    parallel_for(kSeeds, 0, [&](std::size_t s) {
      const auto h = random_test_function(n, 25, 2, 500 + s);
      const GramMatrix g(c, h);
      double sum = 0.0;
      for (double v : g.eigenvalues()) sum += std::abs(v);
      const double expected = static_cast<double>(c->size()) * h.l2_norm_sq() / std::pow(kTwoPi, n);
      err[ci * kSeeds + s] = std::abs(sum - expected) / expected;
    });
  }
  const double w = *std::max_element(err.begin(), err.end());
  return {w <= 1e-10, std::to_string(err.size()) + " (n, lambda, h) cases, max relative error " + num(w) +
                          " (<= 1e-10)"};
}

Outcome frequency_identity() {
  const auto& m = default_mollifier();
  const auto lambdas = geometric(1.0, 500.0, 10);
  const auto widths = geometric(0.01, 1.0, 10);
  const std::vector<double> offsets{-20.0, -6.0, -3.0, -1.5, -0.5, 0.0, 0.7, 2.0, 4.0, 10.0};
  std::vector<double> disc(1000, 0.0);
  parallel_for(1000, 0, [&](std::size_t i) {
    const double lambda = lambdas[i / 100];
    const double eps = widths[(i / 10) % 10];
    const double mu = std::max(0.0, lambda + eps * offsets[i % 10]);
    disc[i] = frequency_identity_check(m, mu, lambda, eps).discrepancy;
  });
  const double w = *std::max_element(disc.begin(), disc.end());
  return {w <= 1e-6, "1000 (mu, lambda, eps) points, max discrepancy " + num(w) + " (<= 1e-6)"};
}

Outcome kernel_two_term() {
  const TorusConfig cfg(2);
  const auto& m = default_mollifier();
  const std::vector<double> lambdas{50.0, 100.0, 200.0, 400.0};
  const std::vector<double> widths{0.1, 0.2, 0.5};
  std::vector<SweepRow> rows(lambdas.size() * widths.size());
  std::vector<double> j_margin(rows.size(), 0.0);
  parallel_for(rows.size(), 0, [&](std::size_t i) {
    const double lambda = lambdas[i / widths.size()];
    const double eps = widths[i % widths.size()];
    const auto rep = decompose_diagonal(cfg, lambda, eps, m);
    auto& r = rows[i];
    r.lambda = lambda;
    r.epsilon = eps;
    r.value = rep.total;
    r.bound = eps * lambda + std::sqrt(lambda / eps);
    r.ratio = rep.ratio_two_term;
    r.group = "eps=" + num(eps);
    j_margin[i] = std::abs(rep.J) / (1e-8 * eps * lambda);
  });
  const auto pooled = fit_constant(rows);
  const auto per_eps = fit_groups(rows, FitColumn::Ratio);
  auto env_rows = rows;
  for (auto& r : env_rows) r.group = "all";
  const auto env = fit_groups(env_rows, FitColumn::Ratio, true).at("all");
  const double jw = *std::max_element(j_margin.begin(), j_margin.end());
  std::string detail = "C " + num(pooled.C) + ", pooled ratio slope " + num(pooled.slope) +
                       " (<= 0.1); per-eps slopes";
  for (const auto& [g, f] : per_eps) detail += " " + g + ":" + num(f.slope);
  detail += "; envelope slope " + num(env.slope) + "; worst J / (1e-8 eps lambda) " + num(jw);
  return {pooled.slope_defined && std::isfinite(pooled.C) && pooled.slope <= 0.1 && jw <= 1.0, detail};
}

Outcome periodization() {
  const auto& m = default_mollifier();
  double worst = 0.0;
  std::string where;
  for (double lambda : {10.0, 20.0, 50.0}) {
    for (double eps : {0.3, 0.5, 1.0}) {
      const auto p = periodized_diagonal_check(TorusConfig(2), lambda, eps, m);
      if (p.relative_discrepancy >= worst) {
        worst = p.relative_discrepancy;
        where = "lambda " + num(lambda) + " eps " + num(eps);
      }
    }
  }
  double gauss = 0.0;
  for (int n : {2, 3}) gauss = std::max(gauss, periodized_gaussian_check(TorusConfig(n)).relative_discrepancy);
  return {worst <= 1e-4 && gauss <= 1e-10, "max relative discrepancy " + num(worst) + " at " + where +
                                               " (<= 1e-4); Gaussian self-test " + num(gauss) + " (<= 1e-10)"};
}

Outcome surface_transform() {
  double closed = 0.0;
  double quad = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double r = 0.25 * i;
    const double exact = r == 0.0 ? 4.0 * kPi : 4.0 * kPi * std::sin(r) / r;
    closed = std::max(closed, std::abs(sphere_ft(3, r) - exact));
    quad = std::max(quad, std::abs(sphere_ft_quadrature(3, r) - exact));
  }
  std::string env;
  bool bounded = true;
  for (int n : {2, 3, 4}) {
    const double e500 = sphere_ft_envelope(n, 500.0);
    const double e250 = sphere_ft_envelope(n, 250.0);
    bounded = bounded && std::isfinite(e500) && e500 <= 1.05 * e250;
    env += " n=" + std::to_string(n) + ":" + num(e500);
  }
  return {closed <= 1e-6 && quad <= 1e-6 && bounded,
          "n=3 closed form error " + num(closed) + ", quadrature error " + num(quad) +
              " (<= 1e-6); envelope sup r<=500" + env + " (within 5% of sup r<=250)"};
}

Outcome critical_schatten() {
  SweepSpec s;
  s.n = 2;
  s.mode = SweepMode::Schatten;
  s.lambdas = {10.0, 20.0, 40.0, 80.0};
  s.eps = EpsRule::fixed(1.0);
  s.trials = 20;
  s.alpha = 3.0;
  s.seed = 11;
  s.jobs = 0;
  const auto res = run_sweep(s);
  auto env_rows = res.rows;
  for (auto& r : env_rows) r.group = "all";
  const auto env = fit_groups(env_rows, FitColumn::Ratio, true).at("all");
  const auto& f = res.ratio_fit;
  const bool ok = res.failures == 0 && f.slope_defined && std::abs(f.slope) <= 0.1 && env.slope_defined &&
                  std::abs(env.slope) <= 0.1;
  return {ok, std::to_string(res.rows.size()) + " rows at eps 1, pooled ratio slope " + num(f.slope) +
                  " +- " + num(f.stderr_slope) + ", max-over-seeds slope " + num(env.slope) +
                  " (|.| <= 0.1), C " + num(f.C)};
}

Outcome duality_pairing() {
  constexpr int kTrials = 100;
  std::vector<double> slack(kTrials, 0.0);
  parallel_for(kTrials, 0, [&](std::size_t t) {
    std::mt19937_64 rng(7000 + t);
    std::uniform_real_distribution<double> lam(5.0, 25.0);
    std::uniform_real_distribution<double> wid(0.2, 1.0);
    std::normal_distribution<double> z(0.0, 1.0);
    ClusterPtr c;
    do {
      c = make_cluster(2, lam(rng), wid(rng));
    } while (c->empty());
    const auto N = static_cast<Eigen::Index>(c->size());
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(std::min<Eigen::Index>(N, 8)));
    const auto r = random_subspace(c, d, rng());
    std::vector<double> zeta(static_cast<std::size_t>(d));
    for (auto& v : zeta) v = z(rng);
    const auto h = random_test_function(2, 1 + static_cast<int>(rng() % 9), 2, rng());
    const double alphas[] = {1.0, 1.5, 2.0, 3.0, 6.0};
    const LpExponent a(alphas[t % 5]);
    const auto d0 = dual_pairing_check(r, zeta, h, a);
    slack[t] = d0.slack / std::max(1.0, d0.rhs);
  });
  const double worst = *std::min_element(slack.begin(), slack.end());

  const auto c = make_cluster(2, 15.0, 0.5);
  const auto h = random_test_function(2, 7, 2, 31);
  const GramMatrix g(c, h);
  const std::vector<double> one{1.0};
  const auto eq = dual_pairing_check(top_eigenvector_subspace(g), one, h, LpExponent(1.0));
  const double tight = std::abs(eq.slack) / eq.rhs;
  return {worst >= -1e-9 && tight <= 1e-6, std::to_string(kTrials) + " trials, min relative slack " +
                                               num(worst) + " (>= -1e-9); eigenvector trial slack/RHS " +
                                               num(tight) + " (<= 1e-6)"};
}

Outcome corollary() {
  const std::vector<LpExponent> ps{LpExponent(6.0), LpExponent(12.0), LpExponent::infinity()};
  const auto res = corollary_suite(2, ps, {20.0, 40.0, 80.0}, EpsRule::shrink(), 5, {}, 0);
  bool ok = res.failures == 0;
  std::string detail;
  for (const auto& p : ps) {
    const std::string prefix = "p=" + p.to_string() + " ";
    std::vector<SweepRow> rows;
    for (const auto& r : res.rows) {
      if (r.group.rfind(prefix, 0) == 0) rows.push_back(r);
    }
    const auto f = fit_constant(rows);
    ok = ok && f.slope_defined && std::isfinite(f.C) && f.slope <= 0.1;
    detail += prefix + "C " + num(f.C) + " slope " + num(f.slope) + "; ";
  }
  double branch = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const LpExponent pc(critical_p(n));
    branch = std::max(branch, std::abs(sigma_supercritical_branch(n, pc) - sigma_subcritical_branch(n, pc)));
    branch = std::max(branch, std::abs(alpha_supercritical_branch(n, pc) - alpha_subcritical_branch(n, pc)));
  }
  ok = ok && branch <= 1e-14;
  return {ok, detail + "slopes <= 0.1; branch gap at p_c for n=2..8 " + num(branch) + " (<= 1e-14)"};
}

Outcome weyl_remainder() {
  const TorusConfig cfg(2);
  double C = 0.0;
  for (double r : geometric(10.0, 2000.0, 60)) {
    const auto b = count_ball(cfg, r);
    const double direct = static_cast<double>(b.count) - kPi * r * r;
    if (std::abs(direct - b.weyl_remainder) > 1e-6 * r * r) return {false, "remainder mismatch at r " + num(r)};
    C = std::max(C, std::abs(direct) / r);
  }
  return {std::isfinite(C), "r in [10, 2000], fitted C = max |N(r) - pi r^2| / r = " + num(C)};
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  int failed = 0;
  int index = 0;
  auto report = [&](const std::string& name, const std::function<Outcome()>& fn) {
    ++index;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << index << ". " << name << ": " << o.detail << " ["
              << num(s) << " s]" << std::endl;
  };

  report("band enumeration equals cube-scan oracle", oracle_equality);
  SweepResult two;
  SweepResult three;
  report("shrinking-band count scaling", [&] {
    two = counts_sweep(2, 10.0, 5000.0);
    three = counts_sweep(3, 10.0, 300.0);
    return band_count_scaling(two, three);
  });
  report("full-cluster lower bound", [&] { return full_cluster_lower_bound(two); });
  report("density basis independence", basis_independence);
  report("Gram trace identity", trace_identity);
  report("mollifier frequency identity", frequency_identity);
  report("kernel diagonal two-term bound", kernel_two_term);
  report("periodization of the mollified diagonal", periodization);
  report("sphere surface-measure transform", surface_transform);
  report("critical Schatten scaling", critical_schatten);
  report("trace duality pairing", duality_pairing);
  report("subspace density bounds and exponent branches", corollary);
  report("Weyl remainder in the plane", weyl_remainder);

  std::cout << (13 - failed) << " of 13 criteria passed" << std::endl;
  return failed;
}
