#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = clusterlab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "clusterlab_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, CountPrintsTheBand) {
  const auto r = invoke({"count", "--n", "2", "--lambda", "5", "--eps", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# clusterlab count config_hash=", 0), 0u);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  EXPECT_EQ(line, "20");
  int vectors = 0;
  while (std::getline(lines, line)) ++vectors;
  EXPECT_EQ(vectors, 20);
}

TEST(Cli, JsonFormat) {
  const auto r = invoke({"count", "--n", "3", "--lambda", "1", "--eps", "0.5", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["count"], 18);
  EXPECT_TRUE(j["meta"].contains("config_hash"));
}

TEST(Cli, ExponentTable) {
  const auto r = invoke({"exponents", "--n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0.1666"), std::string::npos) << r.out;
}

TEST(Cli, InvalidInputExitsOne) {
  EXPECT_EQ(invoke({"count", "--n", "2", "--lambda", "5", "--eps", "2"}).code, 1);
  EXPECT_EQ(invoke({"count", "--n", "2", "--lambda", "5"}).code, 1);
  EXPECT_EQ(invoke({"count", "--bogus"}).code, 1);
  EXPECT_EQ(invoke({"nosuch"}).code, 1);
  EXPECT_EQ(invoke({"count", "--n", "1", "--lambda", "5", "--eps", "0.1"}).code, 1);
  EXPECT_EQ(invoke({"kernel", "--n", "2", "--lambda", "10", "--eps", "0.05"}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, NumericFailureExitsTwo) {
  // every grid point fails, which fails the sweep
  const auto r = invoke({"sweep", "--mode", "kernel", "--lambdas", "3000", "--eps", "0.001"});
  EXPECT_EQ(r.code, 2) << r.out << r.err;
}

TEST(Cli, CapacityExitsThree) {
  EXPECT_EQ(invoke({"kernel", "--n", "2", "--lambda", "3000", "--eps", "0.001"}).code, 3);
  const auto r = invoke({"schatten", "--n", "2", "--lambda", "700", "--eps", "1", "--alpha", "3",
                         "--h-modes", "2", "--h-max-freq", "1"});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
}

TEST(Cli, SweepWritesCsv) {
  const auto csv = scratch("sweep.csv");
  fs::remove(csv);
  const auto r = invoke({"sweep", "--mode", "counts", "--lambda-min", "20", "--lambda-max", "200", "--points",
                         "4", "--csv", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(csv);
  std::string first;
  std::string header;
  std::getline(in, first);
  std::getline(in, header);
  EXPECT_EQ(first.rfind("# config_hash=", 0), 0u);
  EXPECT_EQ(header, "lambda,epsilon,n_dim,count,bound,ratio,wall_ms");
}

TEST(Cli, ConfigFileIsOverriddenByFlags) {
  const auto cfg = scratch("count.cfg");
  {
    std::ofstream f(cfg);
    f << "# band\nn = 2\nlambda = 5\neps = 0.1\n";
  }
  const auto a = invoke({"count", "--config", cfg.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("\n20\n"), std::string::npos) << a.out;
  const auto b = invoke({"count", "--config", cfg.string(), "--eps", "0.01"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("\n12\n"), std::string::npos) << b.out;
  EXPECT_NE(a.out.substr(0, a.out.find('\n')), b.out.substr(0, b.out.find('\n')));
  {
    std::ofstream f(cfg);
    f << "n = 2\nlambda = 5\neps = 0.1\nbogus = 1\n";
  }
  EXPECT_EQ(invoke({"count", "--config", cfg.string()}).code, 1);
}

TEST(Cli, SameInputsSameHash) {
  const auto a = invoke({"schatten", "--lambda", "20", "--eps", "0.5", "--seed", "3"});
  const auto b = invoke({"schatten", "--lambda", "20", "--eps", "0.5", "--seed", "3", "--jobs", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}
