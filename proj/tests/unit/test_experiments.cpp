#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "clusterlab/errors.hpp"
#include "clusterlab/experiments.hpp"

using namespace clusterlab;

namespace {

std::vector<SweepRow> power_rows(double exponent, double c) {
  std::vector<SweepRow> rows;
  for (double lambda : {10.0, 30.0, 100.0, 300.0, 1000.0}) {
    SweepRow r;
    r.lambda = lambda;
    r.value = c * std::pow(lambda, exponent);
    r.bound = 1.0;
    r.ratio = r.value;
    rows.push_back(r);
  }
  return rows;
}

SweepSpec counts_spec(int points) {
  SweepSpec s;
  s.n = 2;
  s.lambda_min = 50.0;
  s.lambda_max = 2000.0;
  s.points = points;
  return s;
}

}  // namespace

TEST(Fit, ConstantRatioHasZeroSlope) {
  const auto rows = power_rows(0.0, 0.7);
  const auto f = fit_constant(rows);
  EXPECT_TRUE(f.slope_defined);
  EXPECT_NEAR(f.slope, 0.0, 1e-12);
  EXPECT_NEAR(f.C, 0.7, 1e-15);
  EXPECT_EQ(f.points, 5u);
}

TEST(Fit, RecoversAPowerLaw) {
  const auto f = fit_constant(power_rows(0.1, 2.0));
  EXPECT_NEAR(f.slope, 0.1, 1e-12);
  EXPECT_NEAR(f.stderr_slope, 0.0, 1e-10);
}

TEST(Fit, FewPointsLeaveTheSlopeUndefined) {
  auto rows = power_rows(0.3, 1.0);
  rows.resize(1);
  const auto f = fit_constant(rows);
  EXPECT_FALSE(f.slope_defined);
  EXPECT_EQ(f.points, 1u);
  EXPECT_GT(f.C, 0.0);
}

TEST(Fit, FailedRowsAreSkipped) {
  auto rows = power_rows(0.0, 1.0);
  rows[2].ok = false;
  rows[2].ratio = 1e9;
  const auto f = fit_constant(rows);
  EXPECT_EQ(f.points, 4u);
  EXPECT_NEAR(f.C, 1.0, 1e-15);
}

TEST(Fit, GroupsAndEnvelope) {
  auto a = power_rows(0.0, 1.0);
  auto b = power_rows(0.2, 1.0);
  for (auto& r : a) r.group = "a";
  for (auto& r : b) r.group = "b";
  a.insert(a.end(), b.begin(), b.end());
  const auto g = fit_groups(a, FitColumn::Ratio);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_NEAR(g.at("a").slope, 0.0, 1e-12);
  EXPECT_NEAR(g.at("b").slope, 0.2, 1e-12);
  for (auto& r : a) r.group = "x";
  const auto e = fit_groups(a, FitColumn::Ratio, true);
  EXPECT_EQ(e.at("x").points, 5u);
  EXPECT_NEAR(e.at("x").slope, 0.2, 1e-12);
}

TEST(Sweep, ShrinkingCountsGrowLikeTwoThirds) {
  auto s = counts_spec(12);
  const auto r = run_sweep(s);
  ASSERT_EQ(r.rows.size(), 12u);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_NEAR(r.fit.slope, 2.0 / 3.0, 0.1);
  for (const auto& row : r.rows) EXPECT_NEAR(row.epsilon, std::pow(row.lambda, -1.0 / 3.0), 1e-15);
}

TEST(Sweep, UnitBandsGrowLinearly) {
  auto s = counts_spec(10);
  s.eps = EpsRule::fixed(1.0);
  EXPECT_NEAR(run_sweep(s).fit.slope, 1.0, 0.05);
}

TEST(Sweep, ExplicitGridAndValidation) {
  SweepSpec s;
  s.lambdas = {20.0, 40.0};
  EXPECT_EQ(s.lambda_grid(), s.lambdas);
  EXPECT_EQ(run_sweep(s).rows.size(), 2u);
  SweepSpec bad;
  bad.n = 1;
  EXPECT_THROW(bad.validate(), InvalidConfigError);
  bad = SweepSpec{};
  bad.lambda_min = 0.5;
  EXPECT_THROW(bad.validate(), InvalidConfigError);
  bad = SweepSpec{};
  bad.lambda_max = 5.0;
  EXPECT_THROW(bad.validate(), InvalidConfigError);
  EXPECT_THROW(parse_sweep_mode("bogus"), InvalidConfigError);
  EXPECT_EQ(parse_sweep_mode("corollary"), SweepMode::Corollary);
}

TEST(Sweep, GeometricGrid) {
  const auto g = counts_spec(5).lambda_grid();
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), 50.0);
  EXPECT_NEAR(g.back(), 2000.0, 1e-9);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) EXPECT_NEAR(g[i] * g[i], g[i - 1] * g[i + 1], 1e-6 * g[i] * g[i]);
}

TEST(Sweep, ReproducibleAcrossJobCounts) {
  SweepSpec s;
  s.mode = SweepMode::Schatten;
  s.lambdas = {15.0, 25.0};
  s.trials = 3;
  s.seed = 7;
  const auto a = run_sweep(s);
  s.jobs = 4;
  const auto b = run_sweep(s);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].value, b.rows[i].value);
    EXPECT_EQ(a.rows[i].group, b.rows[i].group);
  }
  EXPECT_EQ(a.config_hash, b.config_hash);
  s.seed = 8;
  EXPECT_NE(run_sweep(s).rows[0].value, a.rows[0].value);
}

TEST(Sweep, KernelRowsCarryTheDecomposition) {
  SweepSpec s;
  s.mode = SweepMode::Kernel;
  s.lambdas = {50.0};
  s.eps = EpsRule::fixed(0.5);
  const auto r = run_sweep(s);
  ASSERT_EQ(r.rows.size(), 1u);
  const auto& row = r.rows[0];
  ASSERT_TRUE(row.ok) << row.error;
  for (const char* k : {"J", "I1_main", "I22", "reassembled", "quadrature_error"}) {
    EXPECT_TRUE(row.extra(k).has_value()) << k;
  }
  EXPECT_FALSE(row.extra("nope").has_value());
}

TEST(Sweep, CorollaryGroups) {
  const auto r = corollary_suite(2, {LpExponent::infinity()}, {20.0, 30.0}, EpsRule::shrink(), 3);
  ASSERT_EQ(r.rows.size(), 8u);
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.ok) << row.error;
    EXPECT_EQ(row.group.rfind("p=inf dim=", 0), 0u) << row.group;
    EXPECT_GT(row.ratio, 0.0);
  }
}

TEST(ConfigHash, StableAndSensitive) {
  const auto a = counts_spec(4).to_config();
  EXPECT_EQ(config_hash(a), config_hash(counts_spec(4).to_config()));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_NE(config_hash(a), config_hash(counts_spec(5).to_config()));
  auto s = counts_spec(4);
  s.jobs = 8;
  s.csv_path = "x.csv";
  EXPECT_EQ(config_hash(s.to_config()), config_hash(a));
}

TEST(Output, CsvLayout) {
  const auto r = run_sweep(counts_spec(4));
  std::ostringstream os;
  write_csv(r, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "# config_hash=" + r.config_hash + " seed=1");
  std::getline(is, line);
  EXPECT_EQ(line, "lambda,epsilon,n_dim,count,bound,ratio,wall_ms");
  int data = 0;
  while (std::getline(is, line) && line.rfind("#", 0) != 0) ++data;
  EXPECT_EQ(data, 4);
  EXPECT_EQ(line.rfind("# fit slope=", 0), 0u);
}

TEST(Output, CsvLayoutWithGroups) {
  SweepSpec s;
  s.mode = SweepMode::Schatten;
  s.lambdas = {12.0};
  s.trials = 2;
  std::ostringstream os;
  write_csv(run_sweep(s), os);
  EXPECT_NE(os.str().find("lambda,epsilon,n_dim,count,bound,ratio,wall_ms,value,group,seed,status\n"),
            std::string::npos);
}

TEST(Output, JsonFields) {
  const auto r = run_sweep(counts_spec(4));
  std::ostringstream os;
  write_json(r, os);
  const auto j = nlohmann::json::parse(os.str());
  EXPECT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["meta"]["config_hash"], r.config_hash);
  EXPECT_EQ(j["meta"]["seed"], 1);
  EXPECT_TRUE(j["fit"].contains("slope"));
  EXPECT_TRUE(j["fit"].contains("C"));
  EXPECT_TRUE(j["spec"].is_object());
}

TEST(Output, SvgIsWellFormed) {
  std::ostringstream os;
  write_svg(run_sweep(counts_spec(4)), os);
  const auto s = os.str();
  EXPECT_EQ(s.rfind("<svg", 0) == 0 || s.find("<svg") != std::string::npos, true);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
}
