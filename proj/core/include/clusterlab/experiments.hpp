#pragma once

// Parameter sweeps over lambda, constant fitting by log-log regression, and
// CSV / JSON / SVG emission of the results.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clusterlab/cluster.hpp"
#include "clusterlab/exponents.hpp"
#include "clusterlab/lattice.hpp"
#include "clusterlab/mollifier.hpp"

namespace clusterlab {

enum class SweepMode { Counts, Kernel, Schatten, Corollary };

std::string to_string(SweepMode mode);
/// "counts", "kernel", "schatten" or "corollary"; InvalidConfigError otherwise.
SweepMode parse_sweep_mode(const std::string& text);

struct SweepSpec {
  int n = 2;
  SweepMode mode = SweepMode::Counts;
  double lambda_min = 10.0;
  double lambda_max = 5000.0;
  int points = 20;
  std::vector<double> lambdas;  // explicit grid; overrides min/max/points when non-empty
  EpsRule eps = EpsRule::shrink();
  std::uint64_t seed = 1;
  int jobs = 1;

  // kernel mode
  MollifierProfile mollifier;

  // schatten mode
  int trials = 20;
  std::optional<double> alpha;  // defaults to n + 1
  int h_modes = 25;
  int h_max_freq = 2;

  // corollary mode
  std::vector<LpExponent> p_list{LpExponent(6.0), LpExponent(12.0), LpExponent::infinity()};

  std::string csv_path;
  std::string json_path;
  std::string svg_path;

  /// Geometric grid, ascending.
  std::vector<double> lambda_grid() const;
  /// InvalidConfigError on a bad spec.
  void validate() const;
  /// Canonical key=value form; output paths and jobs are excluded.
  std::map<std::string, std::string> to_config() const;
};

/// FNV-1a 64 over the sorted "key=value\n" lines, as 16 hex digits.
std::string config_hash(const std::map<std::string, std::string>& config);

struct SweepRow {
  double lambda = 0.0;
  double epsilon = 0.0;
  int n_dim = 2;
  std::int64_t count = 0;
  double value = 0.0;  // the measured quantity (N, diagonal, Schatten norm, L^{p/2} norm)
  double bound = 0.0;  // the scale it is compared against
  double ratio = 0.0;  // value / bound
  double wall_ms = 0.0;
  std::string group;  // rows sharing a group form one regression series
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> extras;
  bool ok = true;
  std::string error;

  std::optional<double> extra(const std::string& name) const;
};

struct FitResult {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double C = 0.0;  // max ratio over the fitted rows
  std::size_t points = 0;
  bool slope_defined = false;  // needs >= 4 rows and two distinct lambdas
};

enum class FitColumn { Value, Ratio };

/// OLS of log(column) against log(lambda) over successful rows with a
/// positive column value; C is the largest ratio among them.
FitResult fit_constant(std::span<const SweepRow> rows, FitColumn column = FitColumn::Ratio);

/// Fit per group; for each lambda in a group the rows are first reduced to
/// their maximum ratio when `envelope` is set.
std::map<std::string, FitResult> fit_groups(std::span<const SweepRow> rows, FitColumn column,
                                            bool envelope = false);

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  FitResult fit;        // log(value) against log(lambda)
  FitResult ratio_fit;  // log(ratio) against log(lambda)
  std::size_t failures = 0;
  std::string config_hash;
  std::string version;
};

/// Runs the mode's check at every grid point (concurrently, `spec.jobs`),
/// records per-point failures in the row and fits. NumericError when more
/// than 20% of the points fail.
SweepResult run_sweep(const SweepSpec& spec);

using SubspaceSampler = std::function<ClusterSubspace(ClusterPtr, Eigen::Index, std::uint64_t)>;

/// ||rho^R||_{p/2} against corollary_rhs for subspaces of dimension
/// {1, ceil(N/4), ceil(N/2), N} at each lambda; groups are "p=<p> dim=<class>".
SweepResult corollary_suite(int n, const std::vector<LpExponent>& p_list,
                            const std::vector<double>& lambdas, const EpsRule& eps,
                            std::uint64_t seed, const SubspaceSampler& sampler = {}, int jobs = 1);

void write_csv(const SweepResult& result, std::ostream& out);
void write_json(const SweepResult& result, std::ostream& out);
/// Static scatter of (log lambda, log ratio) with the fitted line.
void write_svg(const SweepResult& result, std::ostream& out);

/// Writes every output path set in the spec.
void write_outputs(const SweepResult& result);

}  // namespace clusterlab
