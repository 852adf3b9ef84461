#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "tvspec/io.hpp"
#include "tvspec/parallel.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "tvspec");
  std::ostringstream out, err;
  const int code = tvspec::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tvspec_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) { return tvspec::io::read_file(path); }

}  // namespace

TEST_CASE("usage errors exit with status 2 and print usage") {
  auto r = run({"--no-such-flag"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  r = run({"simulate", "--bogus", "1", "--out", "x.csv"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  r = run({"frobnicate"});
  CHECK(r.code == 2);
  r = run({"demo", "--example", "nonsense"});
  CHECK(r.code == 2);
}

TEST_CASE("help and version") {
  auto r = run({"--help"});
  CHECK(r.code == 0);
  for (const char* sub : {"simulate", "preperiodogram", "baseline", "estimate", "evaluate", "kernel", "render", "demo"})
    CHECK(r.out.find(sub) != std::string::npos);
  r = run({"estimate", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--strict") != std::string::npos);
  r = run({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find("TVSPEC01") != std::string::npos);
}

TEST_CASE("pipeline: simulate, preperiodogram, baseline, estimate, evaluate, kernel, render") {
  TempDir tmp;
  auto r = run({"simulate", "--model", "tvma2-break", "--T", "64", "--seed", "5", "--out", tmp / "sim/series.csv",
                "--truth", tmp / "sim/truth.csv"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(tmp / "sim/manifest.json"));

  r = run({"preperiodogram", "--in", tmp / "sim/series.csv", "--out", tmp / "raw/raw.bin"});
  REQUIRE(r.code == 0);
  CHECK(slurp(tmp / "raw/raw.bin").substr(0, 8) == "TVSPEC01");
  r = run({"preperiodogram", "--in", tmp / "sim/series.csv", "--out", tmp / "raw/raw.csv", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(slurp(tmp / "raw/raw.csv").rfind("tau,j,value\n", 0) == 0);

  r = run({"baseline", "--raw", tmp / "raw/raw.bin", "--bt", "0.2", "--bf", "0.2", "--out", tmp / "base/plane.csv"});
  REQUIRE(r.code == 0);

  r = run({"estimate", "--raw", tmp / "raw/raw.bin", "--out", tmp / "est"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("iter 0") != std::string::npos);
  for (const char* f : {"plane.csv", "diagnostics.jsonl", "config.txt", "history.bin", "manifest.json"})
    CHECK(fs::exists(tmp / (std::string("est/") + f)));
  const auto manifest = nlohmann::json::parse(slurp(tmp / "est/manifest.json"));
  CHECK(manifest["command"] == "estimate");
  CHECK(manifest["inputs"][0]["sha256"].get<std::string>().size() == 64);
  CHECK(manifest["timings"]["iteration_seconds"].size() > 0);
  CHECK(manifest["config"].get<std::string>() == slurp(tmp / "est/config.txt"));

  r = run({"evaluate", "--est", tmp / "est/plane.csv", "--truth", tmp / "sim/truth.csv", "--report", tmp / "eval/report.json"});
  REQUIRE(r.code == 0);
  const auto by_plane = nlohmann::json::parse(r.out);
  r = run({"evaluate", "--est", tmp / "est/plane.csv", "--truth-model", "tvma2-break"});
  REQUIRE(r.code == 0);
  const auto by_model = nlohmann::json::parse(r.out);
  CHECK(by_plane["mse"].get<double>() == doctest::Approx(by_model["mse"].get<double>()).epsilon(1e-12));
  CHECK(fs::exists(tmp / "eval/manifest.json"));

  r = run({"kernel", "--result", tmp / "est", "--u", "0.5", "--lambda", "1.0", "--raw", tmp / "raw/raw.bin", "--out",
           tmp / "kern/k.csv"});
  REQUIRE(r.code == 0);
  const auto k = nlohmann::json::parse(r.out);
  CHECK(k["weight_sum"].get<double>() == doctest::Approx(k["n_hat"].get<double>()).epsilon(1e-9));
  CHECK(k["f_reapplied"].get<double>() == doctest::Approx(k["f_hat"].get<double>()).epsilon(1e-9));

  r = run({"render", "--in", tmp / "est/plane.csv", "--out", tmp / "img/plane.ppm"});
  REQUIRE(r.code == 0);
  CHECK(slurp(tmp / "img/plane.ppm").rfind("P6\n", 0) == 0);
  CHECK(fs::exists(tmp / "img/plane.ppm.json"));

  // Re-running with the echoed config reproduces the outputs byte for byte.
  std::ofstream(tmp / "echo.cfg") << manifest["config"].get<std::string>();
  r = run({"estimate", "--raw", tmp / "raw/raw.bin", "--config", tmp / "echo.cfg", "--out", tmp / "est2"});
  REQUIRE(r.code == 0);
  CHECK(slurp(tmp / "est/plane.csv") == slurp(tmp / "est2/plane.csv"));
  CHECK(slurp(tmp / "est/history.bin") == slurp(tmp / "est2/history.bin"));
}

TEST_CASE("data errors exit with status 3") {
  TempDir tmp;
  std::ofstream(tmp / "short.csv") << "1\n2\n3\n";
  CHECK(run({"preperiodogram", "--in", tmp / "short.csv", "--out", tmp / "x.bin"}).code == 3);
  std::ofstream(tmp / "garbage.bin") << "garbage";
  CHECK(run({"estimate", "--raw", tmp / "garbage.bin", "--out", tmp / "e"}).code == 3);
  fs::create_directories(tmp / "empty");
  CHECK(run({"kernel", "--result", tmp / "empty", "--u", "0.5", "--lambda", "1", "--out", tmp / "k.csv"}).code != 0);
}

TEST_CASE("config errors and strict warnings") {
  TempDir tmp;
  REQUIRE(run({"simulate", "--model", "tvma2", "--T", "64", "--out", tmp / "s.csv"}).code == 0);
  std::ofstream(tmp / "typo.cfg") << "gamma = 1.2\n";
  auto r = run({"estimate", "--raw", tmp / "s.csv", "--config", tmp / "typo.cfg", "--out", tmp / "e"});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown key") != std::string::npos);
  std::ofstream(tmp / "warn.cfg") << "rho = 1.2\nk_hard = 1\n";
  r = run({"estimate", "--raw", tmp / "s.csv", "--config", tmp / "warn.cfg", "--out", tmp / "e", "--strict"});
  CHECK(r.code == 4);
  r = run({"estimate", "--raw", tmp / "s.csv", "--config", tmp / "warn.cfg", "--out", tmp / "e"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("demo writes the comparison summary") {
  TempDir tmp;
  const auto r = run({"demo", "--example", "wn-break", "--T", "64", "--seed", "7", "--out", tmp / "demo"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(tmp / "demo/summary.json"));
  for (const char* key : {"mse_adaptive", "mse_na_same_window", "mse_na_opt", "break_location"})
    CHECK(j.contains(key));
  CHECK(j["adaptive"]["se_quantiles"].contains("q50"));
  CHECK(fs::exists(tmp / "demo/manifest.json"));
}

TEST_CASE("outputs do not depend on the worker count") {
  TempDir tmp;
  REQUIRE(run({"simulate", "--model", "wn-break", "--T", "64", "--seed", "3", "--out", tmp / "s.csv"}).code == 0);
  const std::size_t saved = tvspec::worker_count();
  tvspec::set_worker_count(1);
  REQUIRE(run({"estimate", "--raw", tmp / "s.csv", "--out", tmp / "one"}).code == 0);
  tvspec::set_worker_count(4);
  REQUIRE(run({"estimate", "--raw", tmp / "s.csv", "--out", tmp / "four"}).code == 0);
  tvspec::set_worker_count(saved);
  for (const char* f : {"plane.csv", "theta.csv", "n_hat.csv", "state.bin", "history.bin", "config.txt"})
    CHECK(slurp(tmp / (std::string("one/") + f)) == slurp(tmp / (std::string("four/") + f)));
}
