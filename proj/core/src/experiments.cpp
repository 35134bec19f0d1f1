#include "clusterlab/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "clusterlab/errors.hpp"
#include "clusterlab/kernels.hpp"
#include "clusterlab/mollifier.hpp"
#include "clusterlab/parallel.hpp"
#include "clusterlab/schatten.hpp"

#ifndef CLUSTERLAB_VERSION
#define CLUSTERLAB_VERSION "0.0.0"
#endif

namespace clusterlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  // splitmix64 finaliser over the combined words
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double band_width(const EpsRule& rule, int n, double lambda) {
  return std::min(1.0, std::max(rule.apply(n, lambda), 2.0 / lambda));
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

SweepRow base_row(const SweepSpec& spec, double lambda) {
  SweepRow row;
  row.lambda = lambda;
  row.epsilon = band_width(spec.eps, spec.n, lambda);
  row.n_dim = spec.n;
  return row;
}

void fail(SweepRow& row, const std::exception& e) {
  row.ok = false;
  row.error = e.what();
  row.ratio = kNaN;
}

std::vector<SweepRow> counts_point(const SweepSpec& spec, double lambda) {
  SweepRow row = base_row(spec, lambda);
  const auto start = Clock::now();
  try {
    const TorusConfig cfg(spec.n);
    const SpectralBand band(lambda, row.epsilon);
    row.count = count_band(cfg, band);
    row.value = static_cast<double>(row.count);
    row.bound = std::pow(lambda, spec.n - 1) * row.epsilon;
    row.ratio = row.value / row.bound;
    if (lambda <= 40.0) {
      const auto oracle = brute_force_band_oracle(cfg, band);
      row.extras.emplace_back("oracle_count", static_cast<double>(oracle.size()));
      if (static_cast<std::int64_t>(oracle.size()) != row.count) {
        throw NumericError("count " + std::to_string(row.count) + " differs from cube scan " +
                           std::to_string(oracle.size()));
      }
    }
    if (row.count == 0) throw RangeError("empty band");
  } catch (const Error& e) {
    fail(row, e);
  }
  row.wall_ms = elapsed_ms(start);
  return {row};
}

std::vector<SweepRow> kernel_point(const SweepSpec& spec, const Mollifier& moll, double lambda) {
  SweepRow row = base_row(spec, lambda);
  const auto start = Clock::now();
  try {
    const TorusConfig cfg(spec.n);
    const auto rep = decompose_diagonal(cfg, lambda, row.epsilon, moll);
    row.count = count_band(cfg, SpectralBand(lambda, row.epsilon));
    row.value = rep.total;
    row.bound = row.epsilon * std::pow(lambda, spec.n - 1) +
                std::pow(lambda / row.epsilon, 0.5 * (spec.n - 1));
    row.ratio = rep.ratio_two_term;
    row.extras = {{"J", rep.J},
                  {"J_over_eps_lambda", rep.J / (row.epsilon * std::pow(lambda, spec.n - 1))},
                  {"I1_main", rep.I1_main},
                  {"I1_neighbor", rep.I1_neighbor},
                  {"I21", rep.I21},
                  {"I22", rep.I22},
                  {"I2", rep.I2},
                  {"reassembled", rep.reassembled},
                  {"ratio_I1", rep.ratio_I1},
                  {"ratio_I22", rep.ratio_I22},
                  {"quadrature_error", rep.quadrature_error}};
  } catch (const Error& e) {
    fail(row, e);
  }
  row.wall_ms = elapsed_ms(start);
  return {row};
}

std::vector<SweepRow> schatten_point(const SweepSpec& spec, double lambda) {
  const double alpha = spec.alpha.value_or(spec.n + 1.0);
  std::vector<SweepRow> rows;
  ClusterPtr cluster;
  std::string setup_error;
  try {
    const TorusConfig cfg(spec.n);
    cluster = std::make_shared<const SpectralCluster>(
        enumerate_band(cfg, SpectralBand(lambda, band_width(spec.eps, spec.n, lambda))));
  } catch (const Error& e) {
    setup_error = e.what();
  }
  for (int t = 0; t < spec.trials; ++t) {
    SweepRow row = base_row(spec, lambda);
    row.group = "h" + std::to_string(t);
    row.seed = spec.seed + static_cast<std::uint64_t>(t);
    const auto start = Clock::now();
    try {
      if (!cluster) throw ValidationError(setup_error);
      row.count = static_cast<std::int64_t>(cluster->size());
      if (row.count == 0) throw RangeError("empty band");
      const auto h = random_test_function(spec.n, spec.h_modes, spec.h_max_freq, row.seed);
      const GramMatrix g(cluster, h);
      const auto rep = schatten_norm(g, LpExponent(alpha));
      row.value = rep.norm;
      row.bound = rep.bound_rhs;
      if (!(row.bound > 0.0)) throw InvalidConfigError("no reference scale for this Schatten exponent");
      row.ratio = rep.ratio;
    } catch (const Error& e) {
      fail(row, e);
    }
    row.wall_ms = elapsed_ms(start);
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* kDimClasses[] = {"1", "N/4", "N/2", "N"};

std::vector<SweepRow> corollary_point(int n, const std::vector<LpExponent>& p_list, double lambda,
                                      const EpsRule& rule, std::uint64_t seed, std::size_t index,
                                      const SubspaceSampler& sampler) {
  const double eps = band_width(rule, n, lambda);
  std::vector<SweepRow> rows;
  ClusterPtr cluster;
  std::string setup_error;
  try {
    cluster = std::make_shared<const SpectralCluster>(
        enumerate_band(TorusConfig(n), SpectralBand(lambda, eps)));
    if (cluster->empty()) throw RangeError("empty band");
  } catch (const Error& e) {
    setup_error = e.what();
  }
  const auto count = cluster ? static_cast<Eigen::Index>(cluster->size()) : 0;
  const Eigen::Index dims[] = {1, (count + 3) / 4, (count + 1) / 2, count};

  for (int c = 0; c < 4; ++c) {
    const std::uint64_t s = mix_seed(seed, index, static_cast<std::uint64_t>(c));
    std::optional<DensityFunction> rho;
    std::string sample_error = setup_error;
    const auto start = Clock::now();
    double sample_ms = 0.0;
    if (setup_error.empty()) {
      try {
        const ClusterSubspace r = dims[c] == count ? full_subspace(cluster)
                                  : sampler        ? sampler(cluster, dims[c], s)
                                                   : random_subspace(cluster, dims[c], s);
        rho.emplace(density(r));
      } catch (const Error& e) {
        sample_error = e.what();
      }
      sample_ms = elapsed_ms(start);
    }
    for (const auto& p : p_list) {
      SweepRow row;
      row.lambda = lambda;
      row.epsilon = eps;
      row.n_dim = n;
      row.count = count;
      row.seed = s;
      row.group = "p=" + p.to_string() + " dim=" + kDimClasses[c];
      const auto t0 = Clock::now();
      try {
        if (!rho) throw ValidationError(sample_error);
        const LpExponent q = p.is_infinite() ? LpExponent::infinity() : LpExponent(p.value() / 2.0);
        const auto est = lp_norm(*rho, q);
        row.value = est.value;
        row.bound = corollary_rhs(n, p, lambda, eps, static_cast<double>(dims[c]));
        row.ratio = row.value / row.bound;
        row.extras = {{"dim", static_cast<double>(dims[c])},
                      {"lower", est.lower},
                      {"upper", est.upper},
                      {"converged", est.converged ? 1.0 : 0.0}};
      } catch (const Error& e) {
        fail(row, e);
      }
      row.wall_ms = sample_ms + elapsed_ms(t0);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

SweepResult finish(SweepSpec spec, std::vector<std::vector<SweepRow>> per_point) {
  SweepResult out;
  for (auto& rows : per_point) {
    for (auto& r : rows) out.rows.push_back(std::move(r));
  }
  for (const auto& r : out.rows) out.failures += r.ok ? 0 : 1;
  out.fit = fit_constant(out.rows, FitColumn::Value);
  out.ratio_fit = fit_constant(out.rows, FitColumn::Ratio);
  out.config_hash = config_hash(spec.to_config());
  out.version = CLUSTERLAB_VERSION;
  out.spec = std::move(spec);
  if (!out.rows.empty() && 5 * out.failures > out.rows.size()) {
    std::string first;
    for (const auto& r : out.rows) {
      if (!r.ok) {
        first = r.error;
        break;
      }
    }
    throw NumericError("sweep failed at " + std::to_string(out.failures) + " of " +
                       std::to_string(out.rows.size()) + " points; first: " + first);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s;
}

}  // namespace

std::string to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::Counts: return "counts";
    case SweepMode::Kernel: return "kernel";
    case SweepMode::Schatten: return "schatten";
    case SweepMode::Corollary: return "corollary";
  }
  return "counts";
}

SweepMode parse_sweep_mode(const std::string& text) {
  for (auto m : {SweepMode::Counts, SweepMode::Kernel, SweepMode::Schatten, SweepMode::Corollary}) {
    if (text == to_string(m)) return m;
  }
  throw InvalidConfigError("unknown sweep mode '" + text + "'");
}

std::vector<double> SweepSpec::lambda_grid() const {
  if (!lambdas.empty()) return lambdas;
  if (points == 1) return {lambda_min};
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double lo = std::log(lambda_min);
  const double hi = std::log(lambda_max);
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (points - 1));
  grid.front() = lambda_min;
  grid.back() = lambda_max;
  return grid;
}

void SweepSpec::validate() const {
  if (n < 2 || n > kMaxDimension) throw InvalidConfigError("n must lie in [2, " + std::to_string(kMaxDimension) + "]");
  if (lambdas.empty()) {
    if (points < 1) throw InvalidConfigError("points must be >= 1");
    if (!(lambda_min >= 1.0) || !(lambda_max >= lambda_min) || !std::isfinite(lambda_max)) {
      throw InvalidConfigError("need 1 <= lambda_min <= lambda_max");
    }
  } else {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (!(lambdas[i] >= 1.0) || !std::isfinite(lambdas[i])) throw InvalidConfigError("lambda values must be finite and >= 1");
      if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw InvalidConfigError("lambda grid must be strictly ascending");
    }
  }
  if (eps.kind == EpsRule::Kind::Fixed && !(eps.value > 0.0 && eps.value <= 1.0)) {
    throw InvalidConfigError("fixed eps must lie in (0, 1]");
  }
  if (trials < 1) throw InvalidConfigError("trials must be >= 1");
  if (alpha && !(*alpha >= 1.0)) throw InvalidConfigError("alpha must be >= 1");
  if (h_modes < 1 || h_max_freq < 0 ||
      static_cast<long double>(h_modes) > std::pow(2.0L * h_max_freq + 1.0L, n)) {
    throw InvalidConfigError("h_modes must fit in the frequency box");
  }
  if (mode == SweepMode::Corollary) {
    if (p_list.empty()) throw InvalidConfigError("p list is empty");
    for (const auto& p : p_list) {
      if (!p.is_infinite() && p.value() < critical_p(n)) {
        throw InvalidConfigError("p = " + p.to_string() + " is below the critical exponent " + fmt(critical_p(n)));
      }
    }
  }
}

std::map<std::string, std::string> SweepSpec::to_config() const {
  std::map<std::string, std::string> kv{
      {"sweep.n", std::to_string(n)},
      {"sweep.mode", to_string(mode)},
      {"sweep.eps", eps.to_string()},
      {"sweep.seed", std::to_string(seed)},
  };
  if (lambdas.empty()) {
    kv["sweep.lambda_min"] = fmt(lambda_min);
    kv["sweep.lambda_max"] = fmt(lambda_max);
    kv["sweep.points"] = std::to_string(points);
  } else {
    std::vector<std::string> parts;
    for (double l : lambdas) parts.push_back(fmt(l));
    kv["sweep.lambdas"] = join(parts);
  }
  if (mode == SweepMode::Kernel) kv.merge(mollifier.to_config());
  if (mode == SweepMode::Schatten) {
    kv["sweep.trials"] = std::to_string(trials);
    kv["sweep.alpha"] = fmt(alpha.value_or(n + 1.0));
    kv["sweep.h_modes"] = std::to_string(h_modes);
    kv["sweep.h_max_freq"] = std::to_string(h_max_freq);
  }
  if (mode == SweepMode::Corollary) {
    std::vector<std::string> parts;
    for (const auto& p : p_list) parts.push_back(p.to_string());
    kv["sweep.p_list"] = join(parts);
  }
  return kv;
}

std::string config_hash(const std::map<std::string, std::string>& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : config) {
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::optional<double> SweepRow::extra(const std::string& name) const {
  for (const auto& [k, v] : extras) {
    if (k == name) return v;
  }
  return std::nullopt;
}

FitResult fit_constant(std::span<const SweepRow> rows, FitColumn column) {
  FitResult fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    const double y = column == FitColumn::Value ? r.value : r.ratio;
    if (!(y > 0.0) || !std::isfinite(y) || !(r.lambda > 0.0)) continue;
    xs.push_back(std::log(r.lambda));
    ys.push_back(std::log(y));
    if (std::isfinite(r.ratio)) fit.C = std::max(fit.C, r.ratio);
  }
  fit.points = xs.size();
  fit.slope = kNaN;
  fit.stderr_slope = kNaN;
  const std::size_t m = xs.size();
  if (m == 0) return fit;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (m < 4 || !(sxx > 0.0)) return fit;
  fit.slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = ys[i] - my - fit.slope * (xs[i] - mx);
    ssr += e * e;
  }
  fit.stderr_slope = m > 2 ? std::sqrt(ssr / static_cast<double>(m - 2) / sxx) : 0.0;
  fit.slope_defined = true;
  return fit;
}

std::map<std::string, FitResult> fit_groups(std::span<const SweepRow> rows, FitColumn column,
                                            bool envelope) {
  std::map<std::string, std::vector<SweepRow>> groups;
  for (const auto& r : rows) {
    auto& g = groups[r.group];
    if (envelope) {
      auto it = std::find_if(g.begin(), g.end(), [&](const SweepRow& x) { return x.lambda == r.lambda; });
      if (it == g.end()) {
        g.push_back(r);
      } else if (r.ok && (!it->ok || r.ratio > it->ratio)) {
        *it = r;
      }
    } else {
      g.push_back(r);
    }
  }
  std::map<std::string, FitResult> out;
  for (const auto& [name, g] : groups) out[name] = fit_constant(g, column);
  return out;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  if (spec.mode == SweepMode::Corollary) {
    auto res = corollary_suite(spec.n, spec.p_list, spec.lambda_grid(), spec.eps, spec.seed, {}, spec.jobs);
    res.spec = spec;
    res.config_hash = config_hash(spec.to_config());
    return res;
  }
  const auto grid = spec.lambda_grid();
  const bool custom = spec.mode == SweepMode::Kernel &&
                      spec.mollifier.to_config() != MollifierProfile{}.to_config();
  const Mollifier moll = custom ? build_mollifier(spec.mollifier) : default_mollifier();
  std::vector<std::vector<SweepRow>> per_point(grid.size());
  parallel_for(grid.size(), spec.jobs, [&](std::size_t i) {
    switch (spec.mode) {
      case SweepMode::Counts: per_point[i] = counts_point(spec, grid[i]); break;
      case SweepMode::Kernel: per_point[i] = kernel_point(spec, moll, grid[i]); break;
      case SweepMode::Schatten: per_point[i] = schatten_point(spec, grid[i]); break;
      case SweepMode::Corollary: break;
    }
  });
  return finish(spec, std::move(per_point));
}

SweepResult corollary_suite(int n, const std::vector<LpExponent>& p_list,
                            const std::vector<double>& lambdas, const EpsRule& eps,
                            std::uint64_t seed, const SubspaceSampler& sampler, int jobs) {
  SweepSpec spec;
  spec.n = n;
  spec.mode = SweepMode::Corollary;
  spec.lambdas = lambdas;
  spec.eps = eps;
  spec.seed = seed;
  spec.p_list = p_list;
  spec.jobs = jobs;
  spec.validate();
  std::vector<std::vector<SweepRow>> per_point(lambdas.size());
  parallel_for(lambdas.size(), jobs, [&](std::size_t i) {
    per_point[i] = corollary_point(n, p_list, lambdas[i], eps, seed, i, sampler);
  });
  return finish(std::move(spec), std::move(per_point));
}

void write_csv(const SweepResult& result, std::ostream& out) {
  const bool counts = result.spec.mode == SweepMode::Counts;
  out << "# config_hash=" << result.config_hash << " seed=" << result.spec.seed << "\n";
  out << "lambda,epsilon,n_dim,count,bound,ratio,wall_ms";
  if (!counts) out << ",value,group,seed,status";
  out << "\n";
  out << std::setprecision(17);
  for (const auto& r : result.rows) {
    out << r.lambda << ',' << r.epsilon << ',' << r.n_dim << ',' << r.count << ',' << r.bound << ','
        << r.ratio << ',' << std::setprecision(6) << r.wall_ms << std::setprecision(17);
    if (!counts) out << ',' << r.value << ',' << r.group << ',' << r.seed << ',' << (r.ok ? "ok" : "failed");
    out << "\n";
  }
  out << "# fit slope=" << result.fit.slope << " stderr=" << result.fit.stderr_slope
      << " C=" << result.fit.C << " ratio_slope=" << result.ratio_fit.slope
      << " ratio_stderr=" << result.ratio_fit.stderr_slope << "\n";
}

namespace {

nlohmann::json fit_json(const FitResult& f) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"slope", num(f.slope)},
          {"stderr", num(f.stderr_slope)},
          {"C", num(f.C)},
          {"points", f.points},
          {"slope_defined", f.slope_defined}};
}

}  // namespace

void write_json(const SweepResult& result, std::ostream& out) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json spec(result.spec.to_config());
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) {
    nlohmann::json row{{"lambda", r.lambda},   {"epsilon", r.epsilon}, {"n_dim", r.n_dim},
                       {"count", r.count},     {"value", num(r.value)}, {"bound", num(r.bound)},
                       {"ratio", num(r.ratio)}, {"wall_ms", r.wall_ms}, {"group", r.group},
                       {"seed", r.seed},       {"ok", r.ok}};
    if (!r.ok) row["error"] = r.error;
    for (const auto& [k, v] : r.extras) row["extras"][k] = num(v);
    rows.push_back(std::move(row));
  }
  auto fit = fit_json(result.fit);
  fit["ratio_slope"] = num(result.ratio_fit.slope);
  fit["ratio_stderr"] = num(result.ratio_fit.stderr_slope);
  const nlohmann::json doc{
      {"spec", spec},
      {"rows", rows},
      {"fit", fit},
      {"meta",
       {{"seed", result.spec.seed},
        {"config_hash", result.config_hash},
        {"version", result.version},
        {"failures", result.failures}}}};
  out << doc.dump(2) << "\n";
}

void write_svg(const SweepResult& result, std::ostream& out) {
  constexpr double W = 640;
  constexpr double H = 400;
  constexpr double M = 50;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : result.rows) {
    if (r.ok && r.ratio > 0.0 && std::isfinite(r.ratio)) pts.emplace_back(std::log(r.lambda), std::log(r.ratio));
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  auto sx = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
  auto sy = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };

  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<!-- config_hash=" << result.config_hash << " seed=" << result.spec.seed << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">log lambda</text>\n";
  out << "<text x=\"14\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << H / 2
      << ")\" text-anchor=\"middle\">log ratio</text>\n";
  for (const auto& [x, y] : pts) {
    out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  const auto& f = result.ratio_fit;
  if (f.slope_defined && !pts.empty()) {
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    out << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(my + f.slope * (x0 - mx)) << "\" x2=\"" << sx(x1)
        << "\" y2=\"" << sy(my + f.slope * (x1 - mx)) << "\" stroke=\"firebrick\"/>\n";
  }
  out << "<text x=\"" << W - M << "\" y=\"" << M - 10 << "\" text-anchor=\"end\" font-size=\"12\">slope "
      << f.slope << " C " << f.C << "</text>\n";
  out << "</svg>\n";
}

void write_outputs(const SweepResult& result) {
  auto open = [](const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot open '" + path + "' for writing");
    return f;
  };
  if (!result.spec.csv_path.empty()) {
    auto f = open(result.spec.csv_path);
    write_csv(result, f);
  }
  if (!result.spec.json_path.empty()) {
    auto f = open(result.spec.json_path);
    write_json(result, f);
  }
  if (!result.spec.svg_path.empty()) {
    auto f = open(result.spec.svg_path);
    write_svg(result, f);
  }
}

}  // namespace clusterlab
