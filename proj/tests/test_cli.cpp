#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using capgame::cli::dispatch;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "capgame_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string &name, const std::string &text) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

std::string read(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char *kG1 = R"({"firms": [
  {"id": "A", "a": 1, "b": 0, "price_cap": 1, "gamma": 1},
  {"id": "B", "a": 1, "b": 0, "price_cap": 1, "gamma": 1}]})";

const char *kExample = R"({"demand": 1, "firms": [
  {"id": "1", "a": 1, "b": 1, "price_cap": 10, "gamma": 0.25},
  {"id": "2", "a": 2, "b": 1, "price_cap": 10, "gamma": 0.25}]})";

} // namespace

TEST_CASE("solve prints the equilibrium as JSON") {
  const std::string g1 = write("g1.json", kG1);
  const Run r = run({"solve", "--instance", g1, "--json"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["schema_version"] == capgame::cli::kSchemaVersion);
  CHECK(j["command"] == "solve");
  CHECK(j["instance_digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK(j.contains("duration_ms"));
  CHECK(j["tolerances"].contains("k_relative"));
  CHECK(j["result"]["K"].get<double>() == doctest::Approx(3.0));
  CHECK(j["result"]["firms"][0]["p"].get<double>() == doctest::Approx(1.0));
  CHECK(j["result"]["firms"][1]["p"].get<double>() == doctest::Approx(1.0));
  CHECK(j["result"]["certification"]["passed"] == true);
}

TEST_CASE("solve output round-trips through verify") {
  const std::string inst = write("ex.json", kExample);
  const Run solved = run({"solve", "--instance", inst, "--json"});
  REQUIRE(solved.code == 0);
  const std::string envelope = write("solved.json", solved.out);
  CHECK(run({"verify", "--instance", inst, "--profile", envelope}).code == 0);

  const Json j = Json::parse(solved.out);
  const std::string bare = write("bare.json", j["result"]["profile"].dump());
  const Run v = run({"verify", "--instance", inst, "--profile", bare, "--json",
                     "--grid", "50"});
  CHECK(v.code == 0);
  CHECK(Json::parse(v.out)["result"]["passed"] == true);
}

TEST_CASE("verify rejects a non-equilibrium with exit 2") {
  const std::string inst = write("ex.json", kExample);
  const std::string prof = write("p.json", R"({"strategies": [
      {"id": "1", "z": 1, "p": 1}, {"id": "2", "z": 2, "p": 1}]})");
  const Run r = run({"verify", "--instance", inst, "--profile", prof});
  CHECK(r.code == capgame::cli::kExitCertificationFailed);
  CHECK(r.out.find("FAILED") != std::string::npos);
}

TEST_CASE("output is deterministic apart from the duration") {
  const std::string inst = write("ex.json", kExample);
  Json a = Json::parse(run({"solve", "--instance", inst, "--json"}).out);
  Json b = Json::parse(run({"solve", "--instance", inst, "--json"}).out);
  a.erase("duration_ms");
  b.erase("duration_ms");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("wardrop and best-response") {
  const std::string inst = write("ex.json", kExample);
  const std::string prof = write("p.json", R"({"strategies": [
      {"id": "2", "z": 2, "p": 1}, {"id": "1", "z": 1, "p": 1}]})");
  const Run w = run({"wardrop", "--instance", inst, "--profile", prof, "--json"});
  REQUIRE(w.code == 0);
  const Json jw = Json::parse(w.out)["result"];
  CHECK(jw["K"].get<double>() == doctest::Approx(2.5));
  CHECK(jw["flows"][0]["x"].get<double>() == doctest::Approx(0.5));

  const Run br = run({"best-response", "--instance", inst, "--profile", prof,
                      "--firm", "2", "--json"});
  REQUIRE(br.code == 0);
  const Json jb = Json::parse(br.out)["result"];
  CHECK(jb["case"] == "unique");
  CHECK(jb["branch"] == "interior_price");
  CHECK(jb["profit"].get<double>() == doctest::Approx(0.085786).epsilon(1e-5));

  CHECK(run({"best-response", "--instance", inst, "--profile", prof, "--firm",
             "9"})
            .code == capgame::cli::kExitInvalidInput);
}

TEST_CASE("sweep-gm writes CSV") {
  const Run r = run({"sweep-gm", "--m-values", "1,10"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, row1, row10, extra;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row10);
  CHECK(header == "M,K,social_cost_pne,opt,poa");
  CHECK_FALSE(std::getline(lines, extra));
  const double poa1 = std::stod(row1.substr(row1.rfind(',') + 1));
  const double poa10 = std::stod(row10.substr(row10.rfind(',') + 1));
  CHECK(poa1 == doctest::Approx(1.25));
  CHECK(poa10 > poa1);
  CHECK(r.out.find('\r') == std::string::npos);

  const std::string out = (scratch() / "sweep.csv").string();
  CHECK(run({"sweep-gm", "--m-values", "2", "--out", out}).code == 0);
  CHECK(read(out).rfind("M,K,social_cost_pne,opt,poa\n2,", 0) == 0);
  CHECK(run({"sweep-gm", "--m-values", "0.5"}).code ==
        capgame::cli::kExitInvalidInput);
  CHECK(run({"sweep-gm", "--m-values", "1,x"}).code == capgame::cli::kExitUsage);
}

TEST_CASE("poa") {
  const std::string g1 = write("g1.json", kG1);
  const Run r = run({"poa", "--instance", g1, "--json"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out)["result"];
  CHECK(j["poa"].get<double>() == doctest::Approx(1.25));
  CHECK(j["opt"].get<double>() == doctest::Approx(2.0));
  CHECK(j.contains("opt_witness"));
}

TEST_CASE("dynamics writes a trace") {
  const std::string g1 = write("g1.json", kG1);
  const std::string trace = (scratch() / "trace.csv").string();
  const Run r = run({"dynamics", "--instance", g1, "--init", "random:3",
                     "--order", "rr", "--max-iters", "200", "--tol", "1e-10",
                     "--trace", trace, "--json"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out)["result"];
  CHECK(j["reason"] == "converged");
  CHECK(j["certification"]["passed"] == true);
  const std::string csv = read(trace);
  CHECK(csv.rfind("iter,firm,z,p,profit,max_change\n", 0) == 0);

  CHECK(run({"dynamics", "--instance", g1, "--order", "sideways"}).code ==
        capgame::cli::kExitUsage);
  const Run zero = run({"dynamics", "--instance", g1, "--init", "zero",
                        "--max-iters", "0"});
  CHECK(zero.code == 0);
  CHECK(zero.out.find("max_iters") != std::string::npos);
}

TEST_CASE("invalid input and usage errors") {
  const std::string bad = write("bad.json", R"({"firms": [
      {"id": "A", "a": 0, "b": 0, "price_cap": 1, "gamma": 1},
      {"id": "B", "a": 1, "b": 0, "price_cap": 1, "gamma": 1}]})");
  const Run r = run({"solve", "--instance", bad});
  CHECK(r.code == capgame::cli::kExitInvalidInput);
  CHECK(r.err.find("NonPositiveParameter") != std::string::npos);

  CHECK(run({"solve", "--instance", write("junk.json", "{not json")}).code ==
        capgame::cli::kExitInvalidInput);
  CHECK(run({"solve", "--instance", "/nonexistent/x.json"}).code ==
        capgame::cli::kExitInvalidInput);
  CHECK(run({}).code == capgame::cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == capgame::cli::kExitUsage);
  CHECK(run({"solve"}).code == capgame::cli::kExitUsage);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("csv solve output") {
  const std::string g1 = write("g1.json", kG1);
  const Run r = run({"solve", "--instance", g1, "--csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("id,regime,z,p,x,profit\nA,capped_price,", 0) == 0);
}
