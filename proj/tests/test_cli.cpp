#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rdkw/cli.hpp"
#include "rdkw/error.hpp"

using rdkw::cli::run_cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rdkw_test_" + name);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 2));
}

}  // namespace

TEST_CASE("verify") {
  const Outcome circ = invoke({"verify", "--p", "10", "--source", "circulant"});
  CHECK(circ.code == 0);
  CHECK(circ.out.find("P: 11\n") != std::string::npos);
  CHECK(circ.out.find("status: ok") != std::string::npos);
  CHECK(field(circ.out, "p1_residual") <= 1e-10);

  const Outcome had = invoke({"verify", "--p", "10", "--source", "hadamard"});
  CHECK(had.code == 0);
  CHECK(had.out.find("P: 16\n") != std::string::npos);
  CHECK(field(had.out, "p1_residual") == 0.0);

  CHECK(invoke({"verify", "--p", "0"}).code == 2);
  CHECK(invoke({"verify", "--source", "sobol"}).code == 2);
}

TEST_CASE("verify --dump writes one column per line") {
  const auto path = temp_file("dump.csv");
  REQUIRE(invoke({"verify", "--p", "3", "--dump", path.string()}).code == 0);
  std::istringstream lines(slurp(path));
  std::string line;
  int count = 0;
  double sum0 = 0.0;
  while (std::getline(lines, line)) {
    ++count;
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
    sum0 += std::stod(line);
  }
  CHECK(count == 4);
  CHECK(std::abs(sum0) <= 1e-12);
  std::filesystem::remove(path);
}

TEST_CASE("run") {
  const Outcome ok = invoke({"run", "--alg", "dspkw-2c", "--objective", "quadratic", "--sigma", "0", "--budget",
                             "2000"});
  CHECK(ok.code == 0);
  CHECK(field(ok.out, "nmse") < 1e-3);
  CHECK(field(ok.out, "iterations") == 1000);
  CHECK(ok.out.find("diverged: no") != std::string::npos);

  const Outcome one = invoke({"run", "--alg", "RDKW-1H", "--objective", "fourth-order", "--budget", "500", "--c",
                              "1", "--B", "500"});
  CHECK(one.code == 0);
  CHECK(field(one.out, "simulations") == 500);

  // With the default c = 0.1 the one-sided estimate J/delta overshoots.
  const Outcome diverged = invoke({"run", "--alg", "RDKW-1H", "--objective", "fourth-order", "--budget", "500"});
  CHECK(diverged.code == 4);
  CHECK(diverged.out.find("diverged: yes") != std::string::npos);
  CHECK(diverged.err.find("non-finite") != std::string::npos);
}

TEST_CASE("run refuses a schedule violating A2 unless forced") {
  const Outcome bad = invoke({"run", "--alpha", "0.6", "--gamma", "0.2"});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("2(alpha-gamma)") != std::string::npos);
  CHECK(bad.out.empty());
  CHECK(invoke({"run", "--alpha", "0.6", "--gamma", "0.2", "--force"}).code == 0);
}

TEST_CASE("usage errors") {
  CHECK(invoke({"run", "--alg", "zzz"}).code == 2);
  CHECK(invoke({"run", "--bogus"}).code == 2);
  CHECK(invoke({"run", "--objective", "cubic"}).code == 2);
  CHECK(invoke({"run", "--budget", "1"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"bench", "--table", "9"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("config file entries are overridden by explicit flags") {
  const auto path = temp_file("run.cfg");
  {
    std::ofstream cfg(path);
    cfg << "# fourth-order run\nobjective = fourth-order\nbudget = 300\nsigma=0\n";
  }
  const Outcome from_file = invoke({"run", "--config", path.string()});
  CHECK(from_file.code == 0);
  CHECK(from_file.out.find("objective: fourth-order") != std::string::npos);
  CHECK(field(from_file.out, "simulations") == 300);

  const Outcome overridden = invoke({"run", "--config", path.string(), "--budget", "200"});
  CHECK(overridden.code == 0);
  CHECK(field(overridden.out, "simulations") == 200);
  CHECK(overridden.out.find("objective: fourth-order") != std::string::npos);

  CHECK(invoke({"run", "--config", (path.string() + ".missing")}).code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("config parsing") {
  const auto entries = rdkw::cli::parse_config("# c\n\n  p = 4 \n--sigma=0.5\n");
  CHECK(entries.at("p") == "4");
  CHECK(entries.at("sigma") == "0.5");
  CHECK_THROWS_AS(rdkw::cli::parse_config("p 4\n"), rdkw::ParseError);
}

TEST_CASE("bench with a table preset") {
  const auto csv = temp_file("bench.csv");
  const Outcome result = invoke({"bench", "--table", "1", "--reps", "5", "--csv", csv.string()});
  CHECK(result.code == 0);
  CHECK(result.out.find("Table 1") != std::string::npos);
  CHECK(result.out.find("DSPKW-2C") != std::string::npos);
  CHECK(result.out.find("RDKW-2H") != std::string::npos);
  CHECK(result.out.find("RDKW-2R") != std::string::npos);
  const std::string text = slurp(csv);
  // Header plus 2 sigmas x 3 algorithms x 5 replications.
  CHECK(std::count(text.begin(), text.end(), '\n') == 31);
  std::filesystem::remove(csv);

  const Outcome single = invoke({"bench", "--table", "2", "--reps", "2", "--sigma", "0.01", "--alg", "dspkw-2c"});
  CHECK(single.code == 0);
  CHECK(single.out.find("fourth-order") != std::string::npos);
  CHECK(single.out.find("RDKW") == std::string::npos);
}

TEST_CASE("run --trajectory") {
  const auto path = temp_file("traj.csv");
  REQUIRE(invoke({"run", "--budget", "100", "--trajectory", path.string()}).code == 0);
  std::istringstream lines(slurp(path));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,sq_error");
  int rows = 0;
  double first = 0.0;
  double last = 0.0;
  while (std::getline(lines, line)) {
    const double err = std::stod(line.substr(line.find(',') + 1));
    if (rows == 0) {
      first = err;
    }
    last = err;
    ++rows;
  }
  CHECK(rows == 51);
  CHECK(last < first);
  std::filesystem::remove(path);
}
