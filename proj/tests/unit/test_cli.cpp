#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "orthodec/io.hpp"

using namespace orthodec;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "orthodec_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("decompose then reconstruct reproduces the input") {
  const ChaosElement f(2, {{{0, 0}, 0.75}, {{1, 0}, -0.5}, {{2, 3}, 1.125}, {{0, 4}, 0.25}});
  const std::string in = scratch("f.json").string(), dec = scratch("d.json").string(), back = scratch("r.json").string();
  write_file(in, to_json(f).dump(2));
  const Result r = run({"decompose", "--in", in, "--out", dec});
  CHECK(r.code == 0);
  const Json report = Json::parse(read_file(dec));
  CHECK(report["omd"]["pass"] == true);
  for (const auto& res : report["omd"]["residuals"]) CHECK(res["residual"] == 0.0);
  CHECK(run({"reconstruct", "--in", dec, "--out", back}).code == 0);
  CHECK(Json::parse(read_file(back)) == Json::parse(read_file(in)));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"decompose"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"decompose", "--in", scratch("missing.json").string()}).code == 2);
  CHECK(run({"simulate", "--n", "0"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("flags override the config file") {
  const std::string cfg = scratch("cfg.json").string();
  write_file(cfg, R"({"replicas": 50, "n": 4, "d": 1, "field": "iid"})");
  const Json from_file = Json::parse(run({"simulate", "--config", cfg, "--no-timestamp"}).out);
  CHECK(from_file["meta"]["replicas"] == 50);
  const Json from_flag = Json::parse(run({"simulate", "--config", cfg, "--replicas", "30", "--no-timestamp"}).out);
  CHECK(from_flag["meta"]["replicas"] == 30);
  CHECK(from_flag["meta"]["config_hash"] != from_file["meta"]["config_hash"]);
}

TEST_CASE("reports are byte-identical across worker counts") {
  const std::vector<std::string> base = {"simulate", "--field", "linear", "--d", "2", "--n", "8",
                                         "--replicas", "40", "--seed", "5", "--no-timestamp"};
  auto with_workers = [&](const std::string& w) {
    auto args = base;
    args.insert(args.end(), {"--workers", w});
    return run(args);
  };
  const Result a = with_workers("1"), b = with_workers("3");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto csv = base;
  csv.insert(csv.end(), {"--format", "csv"});
  const std::string text = run(csv).out;
  CHECK(text.rfind("# version=", 0) == 0);
  CHECK(text.find("seed=5") != std::string::npos);
}

TEST_CASE("timestamps are present unless suppressed") {
  const Json with = Json::parse(run({"vc", "--class", "Q1"}).out);
  CHECK(with["meta"].contains("timestamp"));
  const Json without = Json::parse(run({"vc", "--class", "Q1", "--no-timestamp"}).out);
  CHECK_FALSE(without["meta"].contains("timestamp"));
}

TEST_CASE("vc reports the index of the quadrants in the plane") {
  const Result r = run({"vc", "--class", "Q2"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["vc"]["index"] == 3);
}

TEST_CASE("verify clt fails numerically under a wrong target variance") {
  const std::vector<std::string> base = {"verify", "clt", "--n", "16", "--replicas", "2000", "--no-timestamp"};
  const Result good = run(base);
  CHECK(good.code == 0);
  const double var = Json::parse(good.out)["ks"]["target_variance"].get<double>();
  CHECK(var == doctest::Approx(2.25 * 2.25));
  auto wrong = base;
  wrong.insert(wrong.end(), {"--target-variance", std::to_string(4.0 * var)});
  const Result bad = run(wrong);
  CHECK(bad.code == 1);
  const Json ks = Json::parse(bad.out)["ks"];
  CHECK(ks["pass"] == false);
  CHECK(ks["statistic"].get<double>() > 0.15);
}

TEST_CASE("check-condition and the worker environment default") {
  const std::string in = scratch("geo.json").string();
  write_file(in, to_json(ChaosElement(1, {{{0}, 1.0}, {{1}, 0.5}, {{2}, 0.25}})).dump());
  CHECK(run({"check-condition", "--in", in, "--linear", "--p", "4"}).code == 0);
  setenv("ORTHODEC_WORKERS", "zero", 1);
  CHECK(run({"vc", "--class", "Q1"}).code == 2);
  setenv("ORTHODEC_WORKERS", "2", 1);
  CHECK(run({"vc", "--class", "Q1"}).code == 0);
  unsetenv("ORTHODEC_WORKERS");
}
