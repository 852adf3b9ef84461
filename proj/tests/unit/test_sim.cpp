#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "support.hpp"
#include "tvspec/error.hpp"
#include "tvspec/sim.hpp"

using namespace tvspec;

TEST_CASE("zero innovations give the zero series") {
  const std::vector<double> z(65, 0.0);
  const auto s = sim::generate_from_innovations(sim::tvma2(64), z);
  CHECK(s.size() == 64);
  for (double v : s.values) CHECK(v == 0.0);
}

TEST_CASE("tvma2 recursion matches a hand-written evaluation") {
  const std::size_t T = 50;
  std::vector<double> z(T + 1);
  for (std::size_t i = 0; i <= T; ++i) z[i] = std::sin(0.7 * static_cast<double>(i)) + 0.1;
  const auto s = sim::generate_from_innovations(sim::tvma2(T), z);
  for (std::size_t t = 1; t <= T; ++t) {
    const double u = static_cast<double>(t) / static_cast<double>(T);
    const double expect = std::cos(2.0 * oracle::kPi * u) * z[t] - u * u * z[t - 1];
    CHECK(s.at(t) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("break models switch regime after t0") {
  const std::size_t T = 40;
  std::vector<double> z(T + 1, 1.0);
  const auto wn = sim::generate_from_innovations(sim::white_noise_break(T, 10, 2.0, 5.0), z);
  CHECK(wn.at(10) == 2.0);
  CHECK(wn.at(11) == 5.0);
  const auto b = sim::generate_from_innovations(sim::break_tvma2(T, 10, 3.0), z);
  CHECK(b.at(10) == 3.0);
  const double u = 11.0 / 40.0 - 0.2;
  CHECK(b.at(11) == doctest::Approx(std::cos(2.0 * oracle::kPi * u) - u * u).epsilon(1e-14));
}

TEST_CASE("white-noise break variances match within three Monte-Carlo standard errors") {
  const std::size_t T = 1024;
  const std::size_t t0 = 576;
  const auto spec = sim::white_noise_break(T, t0, 1.0, std::sqrt(10.0));
  const int reps = 200;
  std::vector<double> v1, v2;
  for (int r = 0; r < reps; ++r) {
    const auto s = sim::generate(spec, T, 5000 + static_cast<std::uint64_t>(r));
    double a = 0.0, b = 0.0;
    for (std::size_t t = 1; t <= t0; ++t) a += s.at(t) * s.at(t);
    for (std::size_t t = t0 + 1; t <= T; ++t) b += s.at(t) * s.at(t);
    v1.push_back(a / static_cast<double>(t0));
    v2.push_back(b / static_cast<double>(T - t0));
  }
  auto check = [&](const std::vector<double>& v, double truth) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    CHECK(std::abs(mean - truth) <= 3.0 * se);
  };
  check(v1, 1.0);
  check(v2, 10.0);
}

TEST_CASE("generation is deterministic for a fixed seed") {
  const auto a = sim::generate(sim::tvma2(300), 300, 42);
  const auto b = sim::generate(sim::tvma2(300), 300, 42);
  CHECK(a.values == b.values);
  const auto c = sim::generate(sim::tvma2(300), 300, 43);
  CHECK(a.values != c.values);
}

TEST_CASE("Gaussian source has unit variance") {
  sim::GaussianSource g(7);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = g.next();
    s += v;
    s2 += v * v;
  }
  CHECK(std::abs(s / n) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("true spectrum levels") {
  const auto wn = sim::white_noise_break(1024, 576, 1.0, std::sqrt(10.0));
  CHECK(sim::true_spectrum(wn, 0.3, 1.0) == doctest::Approx(0.159155).epsilon(1e-5));
  CHECK(sim::true_spectrum(wn, 0.7, 1.0) == doctest::Approx(1.591549).epsilon(1e-6));
  const auto m = sim::tvma2(512);
  for (double l : {0.0, 0.5, 2.0, oracle::kPi})
    CHECK(sim::true_spectrum(m, 0.0, l) == doctest::Approx(1.0 / (2.0 * oracle::kPi)).epsilon(1e-14));
  CHECK(sim::true_spectrum(m, 0.5, 0.0) == doctest::Approx(1.5625 / (2.0 * oracle::kPi)).epsilon(1e-14));
  CHECK(sim::true_spectrum(m, 0.5, 0.0) == doctest::Approx(0.248680).epsilon(1e-5));
}

TEST_CASE("local autocovariance is the Fourier coefficient of the density") {
  const auto m = sim::tvma2(512);
  CHECK(sim::local_autocovariance(m, 0.0, 0) == doctest::Approx(1.0));
  for (double u : {0.1, 0.45, 0.8}) {
    for (long k : {2L, -3L, 7L}) CHECK(sim::local_autocovariance(m, u, k) == 0.0);
    for (long k : {0L, 1L, -1L}) {
      // Composite Simpson quadrature of int f(u, l) e^{ilk} dl over [-pi, pi].
      const int n = 2000;
      const double h = 2.0 * oracle::kPi / n;
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double l = -oracle::kPi + h * i;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * sim::true_spectrum(m, u, l) * std::cos(l * static_cast<double>(k));
      }
      CHECK(sim::local_autocovariance(m, u, k) == doctest::Approx(acc * h / 3.0).epsilon(1e-10));
    }
  }
  const auto wn = sim::white_noise(100, 2.0);
  CHECK(sim::local_autocovariance(wn, 0.3, 0) == doctest::Approx(4.0));
  CHECK(sim::local_autocovariance(wn, 0.3, 1) == 0.0);
}

TEST_CASE("model parameters are validated") {
  CHECK_THROWS_AS(sim::generate(sim::white_noise_break(10, 0), 10, 1), ParameterError);
  CHECK_THROWS_AS(sim::generate(sim::white_noise_break(10, 11), 10, 1), ParameterError);
  CHECK_THROWS_AS(sim::generate(sim::break_tvma2(10, 5, -1.0), 10, 1), ParameterError);
  CHECK_THROWS_AS(sim::parse_model_kind("nope"), ParameterError);
  CHECK(sim::parse_model_kind("tvma2-break") == sim::ModelKind::break_tvma2);
  sim::ModelSpec csv;
  csv.kind = sim::ModelKind::custom_csv;
  CHECK_THROWS_AS(sim::true_spectrum(csv, 0.5, 0.5), UnavailableError);
}
