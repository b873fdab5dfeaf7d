#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dofd/cli.hpp"
#include "oracles.hpp"

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "dofd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dofd::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<double> column_u(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<double> u;
  bool body = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!body) {
      EXPECT_EQ(line, "x,u");
      body = true;
      continue;
    }
    u.push_back(std::stod(line.substr(line.find(',') + 1)));
  }
  return u;
}

}  // namespace

TEST(Cli, SolveCqMatchesDenseSolve) {
  const CliRun r = run({"solve-cq", "--mu", "const", "--v", "sin", "--T", "1", "--steps", "1", "--M", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto u = column_u(r.out);
  ASSERT_EQ(u.size(), 3u);
  // b_0 = 1 and the discrete data are the nodal values (1, 0, -1).
  const Eigen::Vector3d ref =
      oracle::dense_operator(4, 1.0).real().lu().solve(oracle::dense_mass(4) * Eigen::Vector3d(1.0, 0.0, -1.0));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(u[i], ref(i), 1e-15);
}

TEST(Cli, SolveLaplaceWritesVector) {
  const CliRun r = run({"solve-laplace", "--t", "0.5", "--M", "16", "--N", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# N: 8"), std::string::npos);
  EXPECT_EQ(column_u(r.out).size(), 15u);
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args = {"laplace-rates", "--M", "64", "--N", "3,5,7", "--t", "1,0.01"};
  const CliRun a = run(args);
  auto with_threads = args;
  with_threads.insert(with_threads.end(), {"--threads", "1"});
  const CliRun b = run(with_threads);
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run(args).out, a.out);
}

TEST(Cli, RatesCsvHeader) {
  const CliRun r = run({"spatial-rates", "--M", "8,16", "--t", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("param,error_l2,error_h1,rate\n", 0), 0u);
}

TEST(Cli, DataListGivesOneBlockPerEntry) {
  const CliRun both = run({"spatial-rates", "--M", "8,16", "--t", "1,0.1", "--v", "sin,singular"});
  const CliRun sin = run({"spatial-rates", "--M", "8,16", "--t", "1,0.1", "--v", "sin"});
  const CliRun sing = run({"spatial-rates", "--M", "8,16", "--t", "1,0.1", "--v", "singular"});
  ASSERT_EQ(both.code, 0) << both.err;
  const std::string header = "param,error_l2,error_h1,rate\n";
  EXPECT_EQ(both.out, sin.out + sing.out.substr(header.size()));
}

TEST(Cli, WritesToFile) {
  const auto path = std::filesystem::temp_directory_path() / "dofd_cli_out.csv";
  std::filesystem::remove(path);
  const CliRun r = run({"decay", "--M", "50", "--t", "1e6,1e8,1e10", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::string first;
  std::getline(f, first);
  EXPECT_EQ(first, "param,error_l2,error_h1,rate");
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrorsNameTheFlag) {
  struct Case {
    std::vector<std::string> args;
    std::string flag;
  };
  const std::vector<Case> cases = {
      {{"solve-laplace", "--t", "-1", "--M", "10"}, "--t"},
      {{"solve-laplace", "--t", "1", "--M", "1"}, "--M"},
      {{"solve-laplace", "--t", "1", "--M", "10", "--mu", "bogus"}, "--mu"},
      {{"solve-laplace", "--t", "1", "--M", "10", "--v", "bogus"}, "--v"},
      {{"solve-laplace", "--t", "1,2", "--M", "10"}, "--t"},
      {{"spatial-rates", "--M", "40,20,80"}, "--M"},
      {{"laplace-rates", "--N", "5"}, "--N"},
      {{"small-time", "--scheme", "euler"}, "--scheme"},
      {{"solve-cq", "--T", "1", "--steps", "0", "--M", "8"}, "--steps"},
      {{"decay", "--quad-order", "0"}, "--quad-order"},
      {{"solve-laplace", "--t", "1", "--M", "10", "--v", "sin,singular"}, "--v"},
      {{"cq-rates", "--M", "10", "--v", "sin,bogus"}, "--v"},
      {{"solve-laplace", "--t", "1", "--M", "10", "--mu", "table:/nonexistent/mu.txt"}, "--mu"},
  };
  for (const auto& c : cases) {
    const CliRun r = run(c.args);
    EXPECT_EQ(r.code, 2) << c.args.front() << " " << c.flag;
    EXPECT_NE(r.err.find(c.flag), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
  }
}

TEST(Cli, ParseErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  EXPECT_EQ(run({"solve-cq", "--T", "1"}).code, 2);
  EXPECT_EQ(run({"solve-laplace", "--t", "1", "--M", "10", "--bogus"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, UnwritableOutput) {
  const CliRun r = run({"solve-laplace", "--t", "1", "--M", "10", "--out", "/nonexistent/dir/x.csv"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--out"), std::string::npos);
}

TEST(Cli, NumericalFailureExitCode) {
  // tau = 1e-300 puts b_0 near 1e300 and the step matrix overflows.
  const CliRun r = run({"solve-cq", "--T", "1e-300", "--steps", "4", "--M", "4"});
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, IndicatorWeightWarns) {
  const CliRun r = run({"solve-laplace", "--t", "1", "--M", "10", "--mu", "indicator"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_EQ(run({"solve-laplace", "--t", "1", "--M", "10"}).err, "");
}

TEST(Cli, TabulatedWeight) {
  const auto path = std::filesystem::temp_directory_path() / "dofd_cli_mu.txt";
  {
    std::ofstream f(path);
    f << "0 1\n1 1\n";
  }
  const CliRun a = run({"solve-laplace", "--t", "1", "--M", "10", "--mu", "table:" + path.string()});
  const CliRun b = run({"solve-laplace", "--t", "1", "--M", "10", "--mu", "const"});
  std::filesystem::remove(path);
  ASSERT_EQ(a.code, 0) << a.err;
  const auto ua = column_u(a.out), ub = column_u(b.out);
  ASSERT_EQ(ua.size(), ub.size());
  for (std::size_t i = 0; i < ua.size(); ++i) EXPECT_NEAR(ua[i], ub[i], 1e-14);
}
