#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sulfex/cli.hpp"
#include "sulfex/io.hpp"

using namespace sulfex;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sulfex");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path dir() {
  const fs::path d = fs::temp_directory_path() / "sulfex_test_cli";
  fs::create_directories(d);
  return d;
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("classify") {
  const auto mixes = write("mixes.csv", "id,wc,c3a,c3s\nhn,0.5,9,40\nml,0.481,5.1,50\nll,0.45,5.0,55\n");
  auto r = run({"classify", mixes});
  CHECK(r.code == 0);
  CHECK(r.out.find("hn  HN") != std::string::npos);
  CHECK(r.out.find("ml  ML") != std::string::npos);
  CHECK(r.out.find("2.6913") != std::string::npos);
  CHECK(r.out.find("-4.315") != std::string::npos);

  r = run({"--format", "json", "classify", mixes});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["mixtures"][0]["group"] == "HN");
  CHECK(doc["mixtures"][2]["group"] == "LL");

  r = run({"classify", "--full-first", mixes});
  CHECK(r.code == 0);
  CHECK(r.out.find("hn  HN") != std::string::npos);
}

TEST_CASE("classify input errors exit 2") {
  auto r = run({"classify", write("noc3s.csv", "id,wc,c3a\na,0.5,5\n")});
  CHECK(r.code == 2);
  CHECK(r.err.find("c3s") != std::string::npos);
  r = run({"classify", write("empty.csv", "")});
  CHECK(r.code == 2);
  CHECK(r.err.find("no rows") != std::string::npos);
  r = run({"classify", (dir() / "missing.csv").string()});
  CHECK(r.code == 2);
  r = run({"classify"});
  CHECK(r.code == 2);
  r = run({"frobnicate"});
  CHECK(r.code == 2);
}

TEST_CASE("predict") {
  const auto mixes = write("pmix.csv", "id,wc,c3a,c3s,cement_content\nm1000,0.49,5,40,0.5\nhn,0.5,9,40,0.589\n");
  const auto plot = (dir() / "curves.csv").string();
  auto r = run({"predict", mixes, "--horizon", "40", "--step", "10", "-o", plot});
  CHECK(r.code == 0);
  CHECK(r.out.find("0.33822") != std::string::npos);
  CHECK(r.out.find("3.236") != std::string::npos);
  CHECK(r.out.find("61.030") != std::string::npos);
  const auto text = slurp(plot);
  const auto at = text.find("m1000/LL,40,");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(text.substr(at + 12)) == doctest::Approx(0.0157 * 0.49 * 40 + 0.0305).epsilon(1e-12));

  r = run({"predict", mixes, "--step", "0"});
  CHECK(r.code == 2);
  r = run({"predict", mixes, "--horizon", "-3"});
  CHECK(r.code == 2);
}

TEST_CASE("generate, fit and determinism") {
  const auto data = (dir() / "data").string();
  auto r = run({"generate", data, "--seed", "5"});
  REQUIRE(r.code == 0);
  const auto b1 = (dir() / "b1.json").string(), b2 = (dir() / "b2.json").string();
  r = run({"fit", data + "/manifest.json", "-o", b1});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("R2 = 1.0000") != std::string::npos);
  CHECK(r.out.find("T-statistic") != std::string::npos);
  CHECK(r.out.find("first boundary") != std::string::npos);
  r = run({"fit", data + "/manifest.json", "-o", b2});
  REQUIRE(r.code == 0);
  CHECK(slurp(b1) == slurp(b2));

  // the fitted bundle is usable by classify
  const auto mixes = write("mixes2.csv", "id,wc,c3a,c3s\nhn,0.5,11,40\n");
  r = run({"classify", mixes, "--bundle", b1});
  CHECK(r.code == 0);
  CHECK(r.out.find("HN") != std::string::npos);

  r = run({"--format", "json", "fit", data + "/manifest.json"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["groups"].size() == 3);
}

TEST_CASE("fit failures are stage-tagged numerical errors") {
  const auto small = (dir() / "small").string();
  REQUIRE(run({"generate", small, "--counts", "1,1,0"}).code == 0);
  const auto r = run({"fit", small + "/manifest.json"});
  CHECK(r.code == 3);
  CHECK(r.err.find("clustering: TooFewPoints") != std::string::npos);
}

TEST_CASE("smooth") {
  const auto series = write("s.csv", "mixture_id,t_years,expansion_percent\na,0,0.2\na,1,0.2\na,3,0.2\na,4,0.2\n");
  auto r = run({"smooth", series});
  CHECK(r.code == 0);
  CHECK(r.out.find("a/smoothed,1,0.2\n") != std::string::npos);
  CHECK(r.out.find("a/smoothed,3,0.2\n") != std::string::npos);

  const auto bumpy = write("b.csv", "mixture_id,t_years,expansion_percent\na,0,0.1\na,1,0.7\na,2,0.2\n");
  r = run({"smooth", bumpy, "--alpha", "1"});
  CHECK(r.out.find("a/smoothed,1,0.7\n") != std::string::npos);
  r = run({"smooth", bumpy, "--alpha", "1.5"});
  CHECK(r.code == 2);
}

TEST_CASE("cluster matches generator labels") {
  const auto data = (dir() / "cl").string();
  REQUIRE(run({"generate", data}).code == 0);
  const auto r = run({"--format", "json", "cluster", data + "/series.csv"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  std::map<std::string, std::string> truth;
  std::istringstream t(slurp(data + "/truth.csv"));
  std::string line;
  std::getline(t, line);
  while (std::getline(t, line)) truth[line.substr(0, line.find(','))] = line.substr(line.find(',') + 1);
  CHECK(doc["cluster_sizes"].size() == 3);
  for (const auto& m : doc["mixtures"]) CHECK(m["group"] == truth[m["id"].get<std::string>()]);
}

TEST_CASE("seed from the environment") {
  const auto data = (dir() / "envseed").string();
  setenv("SULFEX_SEED", "4242", 1);
  auto r = run({"generate", data});
  CHECK(r.out.find("seed 4242") != std::string::npos);
  setenv("SULFEX_SEED", "nope", 1);
  r = run({"generate", data});
  CHECK(r.code == 2);
  unsetenv("SULFEX_SEED");
}

TEST_CASE("help documents defaults") {
  auto r = run({"fit", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0.3") != std::string::npos);
  CHECK(r.out.find("100") != std::string::npos);
  CHECK(r.out.find("0.5") != std::string::npos);
  CHECK(r.out.find("SULFEX_SEED") != std::string::npos);
}

#ifdef SULFEX_CLI_PATH
TEST_CASE("installed binary exit codes") {
  const std::string bin = SULFEX_CLI_PATH;
  const auto mixes = write("bin.csv", "id,wc,c3a\na,0.5,5\n");
  CHECK(WEXITSTATUS(std::system((bin + " --help > /dev/null").c_str())) == 0);
  CHECK(WEXITSTATUS(std::system((bin + " classify " + mixes + " > /dev/null 2>&1").c_str())) == 2);
}
#endif
