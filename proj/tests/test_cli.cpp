#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qwalk/qwalk.hpp"

using namespace qwalk;

namespace {

const std::string walks = QWALK_WALKS_DIR;
const std::string data = QWALK_TEST_DATA;

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qwalk-cli-" + std::to_string(::getpid()) + "-" + name);
}

Run run(const std::string& args) {
  const auto err_file = scratch("stderr");
  const std::string cmd = std::string("\"") + QWALK_CLI + "\" " + args + " 2>\"" + err_file.string() + "\"";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int st = ::pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.err = slurp(err_file);
  std::filesystem::remove(err_file);
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

const Json* find_criterion(const Json& doc, const std::string& name, int sign = 0) {
  for (const auto& c : doc["criteria"]) {
    if (c["name"] != name) continue;
    if (sign != 0 && c["sign"] != sign) continue;
    return &c;
  }
  return nullptr;
}

}  // namespace

TEST(CliValidate, AcceptsAGoodWalk) {
  const auto r = run("validate " + walks + "/std-grover-2d.json");
  EXPECT_EQ(r.status, 0);
  const Json j = parse_json_text(r.out);
  EXPECT_EQ(j["command"], "validate");
  EXPECT_EQ(j["valid"], true);
  EXPECT_EQ(j["walk"]["dimension"], 2);
  EXPECT_EQ(j["walk"]["coin_dimension"], 4);
}

TEST(CliValidate, RejectsBrokenDocuments) {
  const auto coin = run("validate " + data + "/non-unitary-coin.json");
  EXPECT_EQ(coin.status, 2);
  EXPECT_EQ(parse_json_text(coin.out)["valid"], false);
  EXPECT_NE(coin.err.find("coin not unitary"), std::string::npos) << coin.err;

  const auto proj = run("validate " + data + "/overlapping-projections.json");
  EXPECT_EQ(proj.status, 2);
  EXPECT_NE(proj.err.find("orthogonality"), std::string::npos) << proj.err;

  const auto bad = run("validate " + data + "/malformed.json");
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.err.find("malformed JSON"), std::string::npos) << bad.err;

  EXPECT_EQ(run("validate " + data + "/does-not-exist.json").status, 2);
}

TEST(CliUsage, UnknownOptionsAndBadStatesExitTwo) {
  EXPECT_EQ(run("spectrum --no-such-flag " + walks + "/std-grover-2d.json").status, 2);
  EXPECT_EQ(run("").status, 2);
  const auto r = run("simulate " + walks + "/lazy-grover-1d.json --phi 1,2");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("--phi"), std::string::npos);
  EXPECT_EQ(run("simulate " + walks + "/lazy-grover-1d.json --phi e7").status, 2);
  EXPECT_EQ(run("localize " + walks + "/lazy-grover-1d.json --phi e2 --x 0,0").status, 2);
}

TEST(CliSpectrum, StdGroverHasPlusAndMinusOne) {
  const auto r = run("spectrum " + walks + "/std-grover-2d.json --grid 16 --samples 20 --seed 99");
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = parse_json_text(r.out);
  EXPECT_EQ(j["command"], "spectrum");
  EXPECT_EQ(j["seed"], 99);
  EXPECT_EQ(j["samples"], 20);
  ASSERT_EQ(j["eigenvalues"].size(), 2u);
  std::vector<double> re;
  for (const auto& e : j["eigenvalues"]) {
    re.push_back(e[0].get<double>());
    EXPECT_NEAR(e[1].get<double>(), 0.0, 1e-9);
  }
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -1.0, 1e-9);
  EXPECT_NEAR(re[1], 1.0, 1e-9);
  for (const auto& p : j["probes"]) EXPECT_EQ(p["symbol_scan"]["verdict"], "present");
}

TEST(CliSpectrum, OutputIsDeterministicForAFixedSeed) {
  const std::string args = "spectrum " + walks + "/triangular6.json --grid 12 --samples 10 --seed 5";
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliSpectrum, TinyRestComponentIsInconclusive) {
  // sigma_min(C(z) + I) is of order 1e-5: neither below the presence bound nor above the separation bound
  const auto r = run("spectrum " + data + "/tiny-rest-component.json --grid 32");
  EXPECT_EQ(r.status, 1);
  const Json j = parse_json_text(r.out);
  bool inconclusive = false;
  for (const auto& p : j["probes"]) inconclusive = inconclusive || p["symbol_scan"]["verdict"] == "inconclusive";
  EXPECT_TRUE(inconclusive);
}

TEST(CliCriteria, StructuralConclusions) {
  const auto lazy = run("criteria " + walks + "/lazy-grover-1d.json");
  ASSERT_EQ(lazy.status, 0) << lazy.err;
  const Json j = parse_json_text(lazy.out);
  EXPECT_EQ(j["command"], "criteria");
  const Json* plus = find_criterion(j, "symmetric-balance", 1);
  ASSERT_NE(plus, nullptr);
  EXPECT_EQ((*plus)["conclusion"], "eigenvalue 1 present");
  const Json* rest = find_criterion(j, "rest-step-exclusion");
  ASSERT_NE(rest, nullptr);
  EXPECT_EQ((*rest)["conclusion"], "eigenvalue -1 absent");
  for (const auto& c : j["criteria"]) EXPECT_TRUE(c.contains("conclusion")) << c.dump();

  const auto prod = run("criteria " + walks + "/product-triangular3.json");
  ASSERT_EQ(prod.status, 0);
  EXPECT_NE(find_criterion(parse_json_text(prod.out), "product-dimension"), nullptr);
}

TEST(CliSimulate, OneLazyStepFromTheRestComponent) {
  const auto r = run("simulate " + walks + "/lazy-grover-1d.json --phi e2 --steps 1");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "x_1,probability");
  const double expected[] = {4.0 / 9.0, 1.0 / 9.0, 4.0 / 9.0};
  for (int k = 0; k < 3; ++k) {
    const auto cells = split(rows[k + 1]);
    ASSERT_EQ(cells.size(), 2u);
    EXPECT_EQ(std::stoi(cells[0]), k - 1);
    EXPECT_NEAR(std::stod(cells[1]), expected[k], 1e-15);
  }
}

TEST(CliSimulate, StepZeroAndAverageColumn) {
  const auto zero = run("simulate " + walks + "/std-grover-2d.json --phi 0.5,0.5,0.5,0:0.5 --steps 0");
  ASSERT_EQ(zero.status, 0) << zero.err;
  EXPECT_EQ(lines(zero.out), (std::vector<std::string>{"x_1,x_2,probability", "0,0,1"}));

  const auto out = scratch("avg.csv");
  const auto r = run("simulate " + walks + "/lazy-grover-1d.json --phi e2 --steps 1 --average 2 --out " + out.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto rows = lines(slurp(out));
  std::filesystem::remove(out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "x_1,probability,average");
  double total = 0.0;
  for (std::size_t k = 1; k < rows.size(); ++k) total += std::stod(split(rows[k])[2]);
  EXPECT_NEAR(total, 1.0, 1e-14);
  // sites reached only at step 2 appear with probability 0 at step 1
  EXPECT_EQ(split(rows[1])[0], "-2");
  EXPECT_EQ(std::stod(split(rows[1])[1]), 0.0);
}

TEST(CliLocalize, ReportsBothSidesAndTheSeed) {
  const auto r = run("localize " + walks + "/lazy-grover-1d.json --phi e2 --N 200 --quad 256 --seed 3");
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = parse_json_text(r.out);
  EXPECT_EQ(j["command"], "localize");
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["N"], 200);
  EXPECT_EQ(j["quad_points"], 256);
  EXPECT_EQ(j["x"], Json::array({0}));
  const double lhs = j["lhs"];
  const double rhs = j["rhs"];
  EXPECT_NEAR(j["gap"].get<double>(), std::abs(lhs - rhs), 1e-15);
  EXPECT_GT(rhs, 0.05);
  EXPECT_LT(std::abs(lhs - rhs), 0.05);
  ASSERT_EQ(j["contributions"].size(), 1u);
  EXPECT_EQ(j["contributions"][0]["method"], "eigenfunction");
}

TEST(CliDeform, MinusOneOnlyAtTheEnd) {
  const auto r = run("deform " + walks + "/deform-target-1d.json --samples 3 --grid 16");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  const auto header = split(rows[0]);
  ASSERT_EQ(header.size(), 14u);
  EXPECT_EQ(header[0], "t");
  EXPECT_EQ(header[9], "minus_verdict");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto cells = split(rows[k]);
    ASSERT_EQ(cells.size(), header.size());
    EXPECT_EQ(cells[7], "present");
    EXPECT_EQ(cells[9], k + 1 < rows.size() ? "absent" : "present");
    EXPECT_EQ(cells[13], k + 1 < rows.size() ? "0" : "1");
  }
  EXPECT_EQ(split(rows[3])[0], "1");
}
