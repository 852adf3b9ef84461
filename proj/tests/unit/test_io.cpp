#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include <unistd.h>

#include "support.hpp"
#include "tvspec/adaptive.hpp"
#include "tvspec/error.hpp"
#include "tvspec/eval.hpp"
#include "tvspec/io.hpp"
#include "tvspec/sim.hpp"

using namespace tvspec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tvspec_io_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("doubles are written with 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1");
  const double x = 1.0 / 3.0;
  CHECK(std::stod(io::format_double(x)) == x);
}

TEST_CASE("raw container round trip and header layout") {
  TempDir tmp;
  const auto x = oracle::gaussian_series(24, 4);
  const RawPlane raw = preperiodogram_modified(x);
  io::write_raw(tmp.file("raw.bin"), raw);
  const RawPlane back = io::read_raw(tmp.file("raw.bin"));
  CHECK(back.grid == raw.grid);
  CHECK(back.scale == raw.scale);
  CHECK(back.normalized == raw.normalized);

  const std::string bytes = io::read_file(tmp.file("raw.bin"));
  CHECK(bytes.substr(0, 8) == "TVSPEC01");
  CHECK(bytes.size() == 8 + 4 + 4 + 6 * 8 + 8 + raw.normalized.size() * 8);
}

TEST_CASE("corrupt containers are data errors") {
  TempDir tmp;
  io::write_file(tmp.file("bad.bin"), "NOTMAGIC and more bytes to read");
  CHECK_THROWS_AS(io::read_raw(tmp.file("bad.bin")), DataError);
  const RawPlane raw = preperiodogram_modified(oracle::gaussian_series(16, 1));
  io::write_raw(tmp.file("raw.bin"), raw);
  std::string bytes = io::read_file(tmp.file("raw.bin"));
  io::write_file(tmp.file("short.bin"), bytes.substr(0, bytes.size() - 5));
  CHECK_THROWS_AS(io::read_raw(tmp.file("short.bin")), DataError);
  bytes[8] = 9;  // container version
  io::write_file(tmp.file("version.bin"), bytes);
  CHECK_THROWS_AS(io::read_raw(tmp.file("version.bin")), DataError);
  CHECK_THROWS_AS(io::read_raw(tmp.file("missing.bin")), DataError);
}

TEST_CASE("series CSV round trip") {
  TempDir tmp;
  const auto x = oracle::gaussian_series(30, 8);
  io::write_series_csv(tmp.file("s.csv"), x);
  CHECK(io::read_series_csv(tmp.file("s.csv")) == x);
  io::write_file(tmp.file("plain.csv"), "1.5\n-2\n3e-1\n");
  CHECK(io::read_series_csv(tmp.file("plain.csv")) == std::vector<double>{1.5, -2.0, 0.3});
  io::write_file(tmp.file("bad.csv"), "t,value\n1,abc\n");
  CHECK_THROWS_AS(io::read_series_csv(tmp.file("bad.csv")), DataError);
}

TEST_CASE("plane CSV round trip infers the grid") {
  TempDir tmp;
  const EstimationGrid g{RawGrid{40}, 3, 2};
  Plane p = truth_plane(sim::tvma2(40), g);
  io::write_plane_csv(tmp.file("p.csv"), p);
  const Plane back = io::read_plane_csv(tmp.file("p.csv"));
  CHECK(back.grid == g);
  CHECK(back.values == p.values);
  io::write_file(tmp.file("bad.csv"), "u,lambda,f\n0.5,0.1,1\n");
  CHECK_THROWS_AS(io::read_plane_csv(tmp.file("bad.csv")), DataError);
}

TEST_CASE("history round trip supports kernel reconstruction") {
  TempDir tmp;
  const RawPlane raw = preperiodogram_modified(sim::generate(sim::tvma2(40), 40, 2));
  EstimatorConfig cfg;
  cfg.k_hard = 3;
  const RunResult r = run_adaptive(raw, cfg);
  io::write_history(tmp.file("h.bin"), r);
  RunResult back;
  back.config = r.config;
  io::read_history(tmp.file("h.bin"), back);
  CHECK(back.history.size() == r.history.size());
  CHECK(back.final.values == r.final.values);
  CHECK(back.final_n_hat == r.final_n_hat);
  const KernelMap a = reconstruct_kernel(r, 0.4, 1.0);
  const KernelMap b = reconstruct_kernel(back, 0.4, 1.0);
  CHECK(a.weights == b.weights);
}
