#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <ostream>
#include <sstream>

#include "clusterlab/cluster.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/experiments.hpp"
#include "clusterlab/exponents.hpp"
#include "clusterlab/kernels.hpp"
#include "clusterlab/lattice.hpp"
#include "clusterlab/mollifier.hpp"
#include "clusterlab/parallel.hpp"
#include "clusterlab/schatten.hpp"

namespace clusterlab::cli {
namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

using Json = nlohmann::json;

struct Options {
  int n = 2;
  double lambda = kUnset;
  double eps = kUnset;
  std::uint64_t seed = 1;
  int jobs = 0;
  std::string format = "text";
  std::string config;
  std::vector<std::string> mollifier;

  std::int64_t max_list = 100000;
  Eigen::Index dim = 0;
  std::vector<std::string> q{"inf"};
  double sup_rel_width = 1e-7;
  double gaussian_width = 0.0;
  std::vector<std::string> alpha;
  int h_modes = 25;
  int h_max_freq = 2;
  std::vector<std::string> p;

  std::string mode = "counts";
  double lambda_min = 10.0;
  double lambda_max = 5000.0;
  int points = 20;
  std::vector<double> lambdas;
  std::string eps_rule = "shrink";
  int trials = 20;
  double sweep_alpha = 0.0;
  std::vector<std::string> p_list{"6", "12", "inf"};
  std::string csv_path;
  std::string json_path;
  std::string svg_path;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Fills options of `sub` not given on the command line from the config file.
void merge_config(CLI::App& sub, Options& o) {
  if (o.config.empty()) return;
  for (const auto& [key, value] : read_config_file(o.config)) {
    if (key.rfind("mollifier.", 0) == 0) {
      // command-line --mollifier entries come later and win
      o.mollifier.insert(o.mollifier.begin(), key.substr(10) + "=" + value);
      continue;
    }
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config" || key == "help") {
      throw InvalidConfigError("unknown config key '" + key + "' for " + sub.get_name());
    }
    if (opt->count() > 0) continue;
    for (const auto& v : opt->get_expected_max() > 1 ? split_list(value) : std::vector<std::string>{value}) {
      opt->add_result(v);
    }
    opt->run_callback();
  }
}

MollifierProfile mollifier_profile(const Options& o) {
  std::map<std::string, std::string> kv;
  for (const auto& item : o.mollifier) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidConfigError("--mollifier expects key=value, got '" + item + "'");
    kv["mollifier." + trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return MollifierProfile::from_config(kv);
}

Mollifier make_mollifier(const MollifierProfile& p) {
  if (p.to_config() == MollifierProfile{}.to_config()) return default_mollifier();
  return build_mollifier(p);
}

/// Effective option values of the subcommand, one key per flag.
std::map<std::string, std::string> effective_config(const CLI::App& sub, const Options& o) {
  static const std::set<std::string> skip{"help", "config", "jobs", "format", "csv", "json", "svg", "mollifier"};
  std::map<std::string, std::string> kv{{"command", sub.get_name()}};
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || skip.count(name)) continue;
    std::string value;
    if (opt->count() > 0) {
      const auto res = opt->reduced_results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
    } else {
      value = opt->get_default_str();
    }
    kv[name] = value;
  }
  if (sub.get_name() == "kernel" || sub.get_name() == "poisson" || sub.get_name() == "sweep") {
    kv.merge(mollifier_profile(o).to_config());
  }
  return kv;
}

void require_band(const Options& o) {
  if (!std::isfinite(o.lambda)) throw InvalidConfigError("--lambda is required");
  if (!std::isfinite(o.eps)) throw InvalidConfigError("--eps is required");
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

struct Emitter {
  std::ostream& out;
  std::string format;
  std::string command;
  std::string hash;
  std::uint64_t seed;
  Json doc = Json::object();
  std::vector<std::pair<std::string, std::string>> lines;

  void field(const std::string& key, const Json& value) {
    doc[key] = value;
    lines.emplace_back(key, value.is_number_float() ? num(value.get<double>()) : value.dump());
  }

  void flush() {
    if (format == "json") {
      doc["meta"] = {{"command", command}, {"config_hash", hash}, {"seed", seed}};
      out << doc.dump(2) << "\n";
      return;
    }
    out << "# clusterlab " << command << " config_hash=" << hash << " seed=" << seed << "\n";
    for (const auto& [k, v] : lines) out << k << " = " << v << "\n";
  }
};

void check_format(const std::string& f, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (f == a) return;
  }
  throw InvalidConfigError("unsupported --format '" + f + "'");
}

int cmd_count(const Options& o, const std::string& hash, std::ostream& out) {
  check_format(o.format, {"text", "json"});
  require_band(o);
  const TorusConfig cfg(o.n);
  const SpectralBand band(o.lambda, o.eps);
  const auto cluster = enumerate_band(cfg, band, o.jobs);
  const bool list = static_cast<std::int64_t>(cluster.size()) <= o.max_list;
  if (o.format == "json") {
    Json vecs = Json::array();
    if (list) {
      for (const auto& f : cluster.freqs()) vecs.push_back(std::vector<int>(f.k.begin(), f.k.begin() + o.n));
    }
    const Json doc{{"count", cluster.size()},
                   {"lambda", o.lambda},
                   {"eps", o.eps},
                   {"n", o.n},
                   {"vectors", vecs},
                   {"meta", {{"command", "count"}, {"config_hash", hash}, {"seed", o.seed}}}};
    out << doc.dump(2) << "\n";
    return kOk;
  }
  out << "# clusterlab count config_hash=" << hash << " seed=" << o.seed << "\n";
  out << cluster.size() << "\n";
  if (!list) {
    out << "# " << cluster.size() << " vectors exceed --max-list " << o.max_list << "\n";
    return kOk;
  }
  for (const auto& f : cluster.freqs()) {
    for (int i = 0; i < o.n; ++i) out << (i ? " " : "") << f.k[static_cast<std::size_t>(i)];
    out << "\n";
  }
  return kOk;
}

int cmd_density(const Options& o, Emitter& em) {
  check_format(o.format, {"text", "json"});
  require_band(o);
  std::vector<LpExponent> qs;
  for (const auto& q : o.q) qs.push_back(LpExponent::parse(q));
  if (!(o.sup_rel_width > 0.0)) throw InvalidConfigError("--sup-rel-width must be positive");
  const TorusConfig cfg(o.n);
  auto cluster = std::make_shared<const SpectralCluster>(enumerate_band(cfg, SpectralBand(o.lambda, o.eps), o.jobs));
  const auto count = static_cast<Eigen::Index>(cluster->size());
  if (count == 0) throw RangeError("the band contains no lattice points");
  const Eigen::Index d = o.dim == 0 ? count : o.dim;
  if (d < 1 || d > count) throw InvalidConfigError("--dim must lie in [1, " + std::to_string(count) + "]");
  const ClusterSubspace r = d == count ? full_subspace(cluster) : random_subspace(cluster, d, o.seed);
  const DensityFunction rho = density(r);
  em.field("count", count);
  em.field("dim", d);
  em.field("integral", rho.integral().real());
  SupOptions opts;
  opts.rel_width = o.sup_rel_width;
  for (const auto& q : qs) {
    const auto est = lp_norm(rho, q, opts);
    const std::string key = "norm_L" + q.to_string();
    em.field(key, est.value);
    if (q.is_infinite()) {
      em.field(key + "_lower", est.lower);
      em.field(key + "_upper", est.upper);
      em.field(key + "_converged", est.converged);
    } else {
      em.field(key + "_exact", est.exact);
      em.field(key + "_error_estimate", est.error_estimate);
    }
  }
  em.flush();
  return kOk;
}

int cmd_kernel(const Options& o, Emitter& em) {
  check_format(o.format, {"text", "json"});
  require_band(o);
  const TorusConfig cfg(o.n);
  const Mollifier m = make_mollifier(mollifier_profile(o));
  const auto rep = decompose_diagonal(cfg, o.lambda, o.eps, m);
  em.field("total", rep.total);
  em.field("J", rep.J);
  em.field("I1_main", rep.I1_main);
  em.field("I1_neighbor", rep.I1_neighbor);
  em.field("I21", rep.I21);
  em.field("I22", rep.I22);
  em.field("I2_origin", rep.I2_origin);
  em.field("I2", rep.I2);
  em.field("reassembled", rep.reassembled);
  em.field("quadrature_error", rep.quadrature_error);
  em.field("truncation_error", rep.truncation_error);
  em.field("ratio_total", rep.ratio_total);
  em.field("ratio_I1", rep.ratio_I1);
  em.field("ratio_I22", rep.ratio_I22);
  em.field("ratio_J", rep.ratio_J);
  em.field("ratio_two_term", rep.ratio_two_term);
  em.flush();
  return kOk;
}

int cmd_poisson(const Options& o, Emitter& em) {
  check_format(o.format, {"text", "json"});
  const TorusConfig cfg(o.n);
  PoissonCheck pc;
  if (o.gaussian_width > 0.0) {
    pc = periodized_gaussian_check(cfg, o.gaussian_width);
  } else {
    require_band(o);
    pc = periodized_diagonal_check(cfg, o.lambda, o.eps, make_mollifier(mollifier_profile(o)));
  }
  em.field("lattice_side", pc.lattice_side);
  em.field("translate_side", pc.translate_side);
  em.field("relative_discrepancy", pc.relative_discrepancy);
  em.field("tail_estimate", pc.tail_estimate);
  em.field("translates", pc.translates);
  em.flush();
  return kOk;
}

int cmd_schatten(const Options& o, Emitter& em) {
  check_format(o.format, {"text", "json"});
  require_band(o);
  std::vector<LpExponent> alphas;
  if (o.alpha.empty()) {
    alphas = {LpExponent(1.0), LpExponent(2.0), LpExponent(o.n + 1.0), LpExponent::infinity()};
  } else {
    for (const auto& a : o.alpha) alphas.push_back(LpExponent::parse(a));
  }
  const TorusConfig cfg(o.n);
  const auto h = random_test_function(o.n, o.h_modes, o.h_max_freq, o.seed);
  auto cluster = std::make_shared<const SpectralCluster>(enumerate_band(cfg, SpectralBand(o.lambda, o.eps), o.jobs));
  const GramMatrix g(cluster, h);
  em.field("count", cluster->size());
  em.field("h_l2_norm_sq", h.l2_norm_sq());
  em.field("trace", g.trace());
  for (const auto& a : alphas) {
    const auto rep = schatten_norm(g, a);
    const std::string key = "S" + a.to_string();
    em.field(key, rep.norm);
    if (rep.bound_rhs > 0.0) {
      em.field(key + "_bound", rep.bound_rhs);
      em.field(key + "_ratio", rep.ratio);
    }
  }
  em.flush();
  return kOk;
}

int cmd_exponents(const Options& o, const std::string& hash, std::ostream& out) {
  check_format(o.format, {"text", "json"});
  const double pc = critical_p(o.n);
  std::vector<LpExponent> ps;
  if (o.p.empty()) {
    ps = {LpExponent(2.0), LpExponent(pc), LpExponent(2.0 * pc), LpExponent(4.0 * pc), LpExponent::infinity()};
  } else {
    for (const auto& p : o.p) ps.push_back(LpExponent::parse(p));
  }
  Json rows = Json::array();
  for (const auto& p : ps) {
    const auto prof = exponent_profile(o.n, p);
    rows.push_back({{"p", p.to_string()},
                    {"sigma", prof.sigma},
                    {"alpha", prof.alpha},
                    {"eps_power", prof.eps_power},
                    {"branch", !p.is_infinite() && p.value() < pc ? "subcritical" : "supercritical"}});
  }
  if (o.format == "json") {
    const Json doc{{"n", o.n},
                   {"critical_p", pc},
                   {"rows", rows},
                   {"meta", {{"command", "exponents"}, {"config_hash", hash}, {"seed", o.seed}}}};
    out << doc.dump(2) << "\n";
    return kOk;
  }
  out << "# clusterlab exponents config_hash=" << hash << " seed=" << o.seed << "\n";
  out << "# n=" << o.n << " critical_p=" << num(pc) << "\n";
  out << std::left << std::setw(10) << "p" << std::setw(20) << "sigma" << std::setw(20) << "alpha"
      << std::setw(20) << "eps_power"
      << "branch\n";
  for (const auto& r : rows) {
    out << std::setw(10) << r["p"].get<std::string>() << std::setw(20) << num(r["sigma"].get<double>())
        << std::setw(20) << num(r["alpha"].get<double>()) << std::setw(20) << num(r["eps_power"].get<double>())
        << r["branch"].get<std::string>() << "\n";
  }
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  std::string format = o.format == "text" ? "csv" : o.format;
  check_format(format, {"csv", "json", "svg"});
  SweepSpec spec;
  spec.n = o.n;
  spec.mode = parse_sweep_mode(o.mode);
  spec.lambda_min = o.lambda_min;
  spec.lambda_max = o.lambda_max;
  spec.points = o.points;
  spec.lambdas = o.lambdas;
  spec.eps = EpsRule::parse(o.eps_rule);
  spec.seed = o.seed;
  spec.jobs = o.jobs;
  spec.mollifier = mollifier_profile(o);
  spec.trials = o.trials;
  if (o.sweep_alpha != 0.0) spec.alpha = o.sweep_alpha;
  spec.h_modes = o.h_modes;
  spec.h_max_freq = o.h_max_freq;
  spec.p_list.clear();
  for (const auto& p : o.p_list) spec.p_list.push_back(LpExponent::parse(p));
  spec.csv_path = o.csv_path;
  spec.json_path = o.json_path;
  spec.svg_path = o.svg_path;
  spec.validate();

  const SweepResult res = run_sweep(spec);
  write_outputs(res);
  if (format == "json") {
    write_json(res, out);
  } else if (format == "svg") {
    write_svg(res, out);
  } else {
    write_csv(res, out);
  }
  return kOk;
}

int exit_code_for(const std::exception_ptr& ep, std::ostream& err) {
  try {
    std::rethrow_exception(ep);
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral cluster experiments on the flat torus", "clusterlab"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Options o;

  auto common = [&](CLI::App* sub, bool band) {
    sub->add_option("--n", o.n, "torus dimension")->capture_default_str();
    if (band) {
      sub->add_option("--lambda", o.lambda, "band start lambda");
      sub->add_option("--eps", o.eps, "band width epsilon");
    }
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
    sub->add_option("--jobs", o.jobs, "worker threads (0 = all cores)")->capture_default_str();
    sub->add_option("--config", o.config, "key=value file; flags override it");
  };
  auto format = [&](CLI::App* sub, const std::string& help) {
    sub->add_option("--format", o.format, help)->capture_default_str();
  };
  auto mollifier = [&](CLI::App* sub) {
    sub->add_option("--mollifier", o.mollifier, "mollifier profile entry key=value (steepness, gamma_panels, table_step, table_max, conv_points)");
  };

  auto* count = app.add_subcommand("count", "enumerate the lattice points of a band");
  common(count, true);
  count->add_option("--max-list", o.max_list, "print the vectors when there are at most this many")->capture_default_str();
  format(count, "text or json");

  auto* dens = app.add_subcommand("density", "L^q norms of the density of a random cluster subspace");
  common(dens, true);
  dens->add_option("--dim", o.dim, "subspace dimension (0 = full cluster)")->capture_default_str();
  dens->add_option("--q", o.q, "exponents q (comma separated, inf allowed)")->delimiter(',')->capture_default_str();
  dens->add_option("--sup-rel-width", o.sup_rel_width, "relative bracket width for the sup norm")->capture_default_str();
  format(dens, "text or json");

  auto* kern = app.add_subcommand("kernel", "diagonal decomposition of the mollified projector");
  common(kern, true);
  mollifier(kern);
  format(kern, "text or json");

  auto* pois = app.add_subcommand("poisson", "periodization check of the mollified diagonal");
  common(pois, true);
  pois->add_option("--gaussian-width", o.gaussian_width, "run the Gaussian self-test with this width instead")->capture_default_str();
  mollifier(pois);
  format(pois, "text or json");

  auto* schat = app.add_subcommand("schatten", "Schatten norms of h chi h-bar for a random h");
  common(schat, true);
  schat->add_option("--alpha", o.alpha, "Schatten exponents (default 1,2,n+1,inf)")->delimiter(',');
  schat->add_option("--h-modes", o.h_modes, "number of Fourier modes of h")->capture_default_str();
  schat->add_option("--h-max-freq", o.h_max_freq, "largest frequency component of h")->capture_default_str();
  format(schat, "text or json");

  auto* expo = app.add_subcommand("exponents", "sigma, alpha and eps-power table");
  common(expo, false);
  expo->add_option("--p", o.p, "exponents p (default 2, p_c, 2p_c, 4p_c, inf)")->delimiter(',');
  format(expo, "text or json");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep with constant fitting");
  common(sweep, false);
  sweep->add_option("--mode", o.mode, "counts, kernel, schatten or corollary")->capture_default_str();
  sweep->add_option("--lambda-min", o.lambda_min, "smallest lambda")->capture_default_str();
  sweep->add_option("--lambda-max", o.lambda_max, "largest lambda")->capture_default_str();
  sweep->add_option("--points", o.points, "geometric grid size")->capture_default_str();
  sweep->add_option("--lambdas", o.lambdas, "explicit lambda grid (overrides min/max/points)")->delimiter(',');
  sweep->add_option("--eps", o.eps_rule, "shrink, fixed:<eps>, <eps> or power:<e>")->capture_default_str();
  sweep->add_option("--trials", o.trials, "test functions per lambda (schatten mode)")->capture_default_str();
  sweep->add_option("--alpha", o.sweep_alpha, "Schatten exponent (0 = n+1)")->capture_default_str();
  sweep->add_option("--h-modes", o.h_modes, "number of Fourier modes of h")->capture_default_str();
  sweep->add_option("--h-max-freq", o.h_max_freq, "largest frequency component of h")->capture_default_str();
  sweep->add_option("--p-list", o.p_list, "exponents p (corollary mode)")->delimiter(',')->capture_default_str();
  sweep->add_option("--csv", o.csv_path, "write CSV here");
  sweep->add_option("--json", o.json_path, "write JSON here");
  sweep->add_option("--svg", o.svg_path, "write SVG here");
  mollifier(sweep);
  o.format = "text";
  format(sweep, "stdout format: csv (default), json or svg");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    merge_config(*sub, o);
    if (o.jobs <= 0) o.jobs = default_jobs();
    const std::string hash = config_hash(effective_config(*sub, o));
    Emitter em{out, o.format, sub->get_name(), hash, o.seed, Json::object(), {}};
    const std::string name = sub->get_name();
    if (name == "count") return cmd_count(o, hash, out);
    if (name == "density") return cmd_density(o, em);
    if (name == "kernel") return cmd_kernel(o, em);
    if (name == "poisson") return cmd_poisson(o, em);
    if (name == "schatten") return cmd_schatten(o, em);
    if (name == "exponents") return cmd_exponents(o, hash, out);
    return cmd_sweep(o, out);
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
}

}  // namespace clusterlab::cli
