#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nicd/cli.hpp"
#include "nicd/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = nicd::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name, const std::string& content) {
  const auto dir = fs::temp_directory_path() / "nicd_cli_tests";
  fs::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << content;
  return p;
}

const char* kPath = R"({"n": 3, "rho": 0.6, "edges": [[0,1],[1,2],[2,3]], "players": [0, 3], "protocol": "dict:1"})";

}  // namespace

TEST_CASE("eval on a path matches the closed form") {
  const auto file = scratch("path.json", kPath);
  const auto r = run({"eval", "--input", file.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto row = j.is_array() ? j.at(0) : j;
  const double expect = 0.5 + 0.5 * std::pow(0.6, 3);
  CHECK(row.at("success").get<double>() == doctest::Approx(expect).epsilon(1e-14));
  CHECK(row.at("bound").get<double>() == doctest::Approx(expect).epsilon(1e-14));
  // the input file is untouched
  CHECK(nicd::read_text_file(file.string()) == kPath);
}

TEST_CASE("eval output is byte-identical across runs and formats are stable") {
  const auto file = scratch("path2.json", kPath);
  const auto a = run({"eval", "--input", file.string(), "--format", "csv"});
  const auto b = run({"eval", "--input", file.string(), "--format", "csv"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("instance,protocol,success,bound,note\n", 0) == 0);
}

TEST_CASE("--output writes the report to a file") {
  const auto file = scratch("path3.json", kPath);
  const auto dest = fs::temp_directory_path() / "nicd_cli_tests" / "report.csv";
  fs::remove(dest);
  const auto r = run({"eval", "--input", file.string(), "--format", "csv", "--output", dest.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto text = nicd::read_text_file(dest.string());
  CHECK(text.rfind("instance,protocol,success,bound,note\n", 0) == 0);
}

TEST_CASE("star-asym at the critical correlation") {
  const auto r = run({"star-asym", "--rho", "0.7071067811865476", "--k", "3", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header.rfind("k,rho,nu,limit_prob,lower_estimate,slope", 0) == 0);
  std::vector<std::string> cells;
  std::stringstream ls(line);
  for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() >= 4);
  CHECK(std::stod(cells[3]) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("verify exits with the check status") {
  const auto r = run({"verify", "check_reverse_bb", "--seed", "7", "--trials", "1000"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("passed").get<bool>());
  CHECK(run({"verify", "check_reverse_bb", "--seed", "7", "--trials", "1000"}).out == r.out);
  CHECK(run({"verify", "check_reverse_bb", "--seed", "7", "--trials", "1000", "--jobs", "4"}).out == r.out);
}

TEST_CASE("markov-bound and walk") {
  const auto chain = scratch("chain.json", R"({"size": 2, "rows": [[0.7, 0.3], [0.3, 0.7]]})");
  const auto r = run({"markov-bound", "--chain", chain.string(), "--set", "0", "--k", "4"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("exact").get<double>() == doctest::Approx(0.5 * std::pow(0.7, 4)));
  CHECK(j.at("exact").get<double>() <= j.at("bound").get<double>() + 1e-12);
  const auto w = run({"walk", "--sigma", "0.5", "--alpha", "1", "--tau", "0.2", "--n", "100"});
  REQUIRE(w.code == 0);
  CHECK(nlohmann::json::parse(w.out).at(0).at("exponent").get<double>() == doctest::Approx(10.033).epsilon(1e-4));
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == nicd::kExitUsage);
  CHECK(run({"bogus"}).code == nicd::kExitUsage);
  CHECK(run({"eval"}).code == nicd::kExitUsage);
  CHECK(run({"verify", "check_nothing"}).code == nicd::kExitUsage);
  CHECK(run({"walk", "--n", "abc"}).code == nicd::kExitUsage);
  CHECK(run({"star-asym", "--rho", "1.5", "--k", "3"}).code == nicd::kExitPrecondition);
  const auto missing = run({"eval", "--input", "/nonexistent/instance.json"});
  CHECK(missing.code == nicd::kExitPrecondition);
  CHECK(!missing.err.empty());
  const auto bad = scratch("bad.json", R"({"n": 2, "rho": 0.5, "edges": [[0,1]], "players": [0,1], "protocol": "tt:1000"})");
  CHECK(run({"eval", "--input", bad.string()}).code == nicd::kExitPrecondition);
  const auto loose = run({"eval", "--input", bad.string(), "--allow-unbalanced", "--format", "csv"});
  CHECK(loose.code == 0);
  CHECK(loose.out.find("unbalanced allowed") != std::string::npos);
}
