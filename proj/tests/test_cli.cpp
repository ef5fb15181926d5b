#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"

using gibbstree::cli::run_cli;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string &name, const std::string &content) {
  const auto path = std::filesystem::temp_directory_path() / ("gibbstree_test_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("solve prints the critical record") {
  const auto r = run({"solve", "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out ==
        "rho,C,sigma,J_star,mu,p_star[0],p_star[1],p_star[2],B[1],B[2],B[3],B[4],B[5]\n"
        "1,0.3333333333333333,0.3333333333333333,-1.0986122886681096,0.6666666666666666,"
        "0.3333333333333333,0.3333333333333333,0.3333333333333333,1,1.6666666666666665,3,"
        "5.666666666666666,11\n");

  const auto j = run({"solve", "--json", "--quiet"});
  CHECK(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["rho"].get<double>() == doctest::Approx(1.0));
  CHECK(doc["mu"].get<double>() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("invalid models exit with code 2 and an error object") {
  const auto d1 = run({"solve", "--D", "1", "--E", "0,0"});
  CHECK(d1.code == 2);
  const auto err = nlohmann::json::parse(d1.err);
  CHECK(err["error"] == "invalid_model");
  CHECK(err["exit_code"] == 2);
  CHECK(err["message"].get<std::string>().find("degenerate") != std::string::npos);

  const auto missing = run({"solve", "--D", "3", "--E", "0,0,0"});
  CHECK(missing.code == 2);
  CHECK(nlohmann::json::parse(missing.err)["message"].get<std::string>().find("missing E") !=
        std::string::npos);

  CHECK(run({"solve", "--D", "3"}).code == 2);
  CHECK(run({"solve", "--beta", "abc"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"solve", "--format", "text"}).code == 2);
}

TEST_CASE("config files and flag overrides") {
  const auto cfg = temp_file("model.json", R"({"model": {"D": 2, "E": [0, 0, 1.3862943611198906], "beta": 1}})");
  const auto from_file = run({"solve", "--config", cfg.string(), "--json", "--quiet"});
  CHECK(from_file.code == 0);
  CHECK(nlohmann::json::parse(from_file.out)["rho"].get<double>() == doctest::Approx(2.0));
  // flags win over the file
  const auto overridden = run({"solve", "--config", cfg.string(), "--beta", "0", "--json", "--quiet"});
  CHECK(nlohmann::json::parse(overridden.out)["rho"].get<double>() == doctest::Approx(1.0));

  const auto unknown = temp_file("unknown.json", R"({"model": {"D": 2, "E": [0, 0, 0], "gamma": 1}})");
  CHECK(run({"solve", "--config", unknown.string()}).code == 2);
  const auto broken = temp_file("broken.json", R"({"model": )");
  CHECK(run({"solve", "--config", broken.string()}).code == 2);
  const auto missing_e = temp_file("missing_e.json", R"({"model": {"D": 2, "E": [0, 0]}})");
  CHECK(run({"solve", "--config", missing_e.string()}).code == 2);
  CHECK(run({"solve", "--config", "/nonexistent/config.json"}).code == 2);
}

TEST_CASE("converge reports a shrinking distance") {
  const auto r = run({"converge", "--quiet"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "N,n,tv_distance");
  std::vector<double> tv;
  while (std::getline(lines, line)) tv.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  REQUIRE(tv.size() == 6);
  for (std::size_t i = 1; i < tv.size(); ++i) CHECK(tv[i] < tv[i - 1]);
  CHECK(tv.back() < tv.front() / 3.0);

  CHECK(run({"converge", "--orders", "16,5000", "--quiet"}).code == 3);
}

TEST_CASE("moments and laplace checks pass") {
  CHECK(run({"moments", "--quiet"}).code == 0);
  CHECK(run({"moments", "--D", "4", "--E", "0.1,0.2,-0.3,0.4,0", "--beta", "1.5", "--quiet"}).code == 0);
  const auto r = run({"laplace", "--json", "--quiet"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["pass"] == true);
  CHECK(doc["checks"] == 11);
}

TEST_CASE("failed checks exit with code 4") {
  const auto cfg = temp_file("strict.json", R"({"gamma": {"n": 20, "samples": 2000, "threshold": 1e-6}})");
  const auto r = run({"gamma", "--config", cfg.string()});
  CHECK(r.code == 4);
  CHECK(r.err.find("gamma: 1/2 checks passed") != std::string::npos);
}

TEST_CASE("outputs are byte-identical for a fixed seed") {
  const std::vector<std::string> sample = {"sample", "--levels", "12", "--trajectories", "3", "--quiet"};
  CHECK(run(sample).out == run(sample).out);
  auto other_seed = sample;
  other_seed.insert(other_seed.end(), {"--seed", "1"});
  CHECK(run(other_seed).out != run(sample).out);

  const std::vector<std::string> gamma = {"gamma", "--n", "30", "--samples", "5000", "--quiet"};
  auto one = gamma, four = gamma;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  const auto a = run(one), b = run(four);
  CHECK(a.out == b.out);
  CHECK(a.code == b.code);

  const std::vector<std::string> diffuse = {"diffuse", "--parts", "besq", "--paths", "2000", "--discrete-n", "20",
                                            "--quiet", "--json", "--threads", "3"};
  CHECK(run(diffuse).out == run(diffuse).out);
}

TEST_CASE("sample formats and output files") {
  const auto text = run({"sample", "--levels", "3", "--quiet"});
  CHECK(text.out.rfind("# seed 20260101 stream 0\n", 0) == 0);
  const auto csv = run({"sample", "--levels", "3", "--format", "csv", "--quiet"});
  CHECK(csv.out.rfind("stream,step,size\n0,0,1\n", 0) == 0);
  const auto json = run({"sample", "--levels", "3", "--json", "--quiet"});
  CHECK(nlohmann::json::parse(json.out)["trajectories"][0]["sizes"].size() == 4);

  const auto path = std::filesystem::temp_directory_path() / "gibbstree_test_out.csv";
  std::filesystem::remove(path);
  const auto r = run({"sample", "--levels", "3", "--format", "csv", "--out", path.string(), "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == csv.out);
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("solve") != std::string::npos);
}

TEST_CASE("shortest round-trip number formatting") {
  using gibbstree::cli::format_double;
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(2.0 / 3.0)) == 2.0 / 3.0);
}
