#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "tvspec/error.hpp"
#include "tvspec/raw.hpp"

using namespace tvspec;

TEST_CASE("cov_star on a four-point series") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(cov_star(x, 2.0, 2) == 3.0);
  CHECK(cov_star(x, 2.5, 1) == 6.0);
  CHECK(cov_star(x, 2.0, 1) == 4.0);
  CHECK(cov_star(x, 1.0, 1) == 0.0);  // would need X_0
  CHECK_THROWS_AS(cov_star(x, 2.25, 1), ParameterError);
}

TEST_CASE("cov_star agrees with the case-distinction oracle") {
  const auto x = oracle::gaussian_series(23, 3);
  for (double tau = 1.0; tau <= 23.0; tau += 0.5)
    for (std::size_t k = 0; k < 23; ++k)
      CHECK(cov_star(x, tau, k) == oracle::cov_star(x, tau, static_cast<long>(k)));
}

TEST_CASE("raw grid coordinates and folding") {
  const RawGrid g{10};
  CHECK(g.n_time() == 19);
  CHECK(g.n_freq() == 11);
  CHECK(g.tau(0) == 1.0);
  CHECK(g.tau(18) == 10.0);
  CHECK(g.u(0) == doctest::Approx(0.1));
  CHECK(g.u(18) == doctest::Approx(1.0));
  CHECK(g.time_index(5.5) == 9);
  CHECK(g.fold(-3) == 3);
  CHECK(g.fold(13) == 7);
  CHECK(g.fold(20) == 0);
  CHECK(g.fold(10) == 10);
}

TEST_CASE("zero series gives the zero plane") {
  const std::vector<double> x(32, 0.0);
  const auto raw = preperiodogram_modified(x);
  CHECK(raw.normalized.cwiseAbs().maxCoeff() == 0.0);
  CHECK(preperiodogram_classic(x).cwiseAbs().maxCoeff() == 0.0);
  for (double v : periodogram(x)) CHECK(v == 0.0);
}

TEST_CASE("FFT pre-periodogram equals direct summation") {
  for (std::size_t T : {16u, 37u, 64u}) {
    const auto x = oracle::gaussian_series(T, static_cast<unsigned>(T));
    const auto raw = preperiodogram_modified(x);
    const double scale = raw.values().cwiseAbs().maxCoeff();
    for (std::size_t s = 0; s < raw.grid.n_time(); s += 3) {
      for (std::size_t j = 0; j <= T; j += 2) {
        const double direct = oracle::preperiodogram(x, raw.grid.tau(s), raw.grid.lambda(static_cast<long>(j)));
        CHECK(std::abs(raw.value(s, j) - direct) <= 1e-9 * std::max(std::abs(direct), 1e-3 * scale));
      }
    }
  }
}

TEST_CASE("constant series: lag count at lambda = 0") {
  const std::size_t T = 20;
  const double c = 1.7;
  const std::vector<double> x(T, c);
  const auto raw = preperiodogram_modified(x);
  for (double tau : {1.0, 3.5, 10.0, 15.5, 20.0}) {
    const auto s = raw.grid.time_index(tau);
    long count = 0;
    for (long k = -static_cast<long>(T - 1); k <= static_cast<long>(T - 1); ++k)
      if (oracle::cov_star(x, tau, k) != 0.0) ++count;
    CHECK(raw.value(s, 0) == doctest::Approx(c * c / (2.0 * oracle::kPi) * static_cast<double>(count)).epsilon(1e-12));
  }
}

TEST_CASE("averaging the classical pre-periodogram recovers the periodogram") {
  for (std::size_t T : {64u, 257u}) {
    const auto x = oracle::gaussian_series(T, 11);
    const Matrix classic = preperiodogram_classic(x);
    const auto I = periodogram(x);
    for (std::size_t j = 0; j <= T; ++j) {
      const double avg = classic.col(static_cast<Eigen::Index>(j)).mean();
      CHECK(avg == doctest::Approx(I[j]).epsilon(1e-10));
      const double direct = oracle::periodogram(x, oracle::kPi * static_cast<double>(j) / static_cast<double>(T));
      CHECK(I[j] == doctest::Approx(direct).epsilon(1e-9).scale(1e-12));
    }
  }
}

TEST_CASE("single spike: only the lag-0 term survives at t = 1") {
  std::vector<double> x(16, 0.0);
  x[0] = 1.0;
  const Matrix classic = preperiodogram_classic(x);
  for (Eigen::Index j = 0; j < classic.cols(); ++j)
    CHECK(classic(0, j) == doctest::Approx(1.0 / (2.0 * oracle::kPi)).epsilon(1e-14));
}

TEST_CASE("periodogram concentrates a pure cosine at its frequency") {
  const std::size_t T = 256;
  const std::size_t j0 = T / 2;
  std::vector<double> x(T);
  for (std::size_t t = 1; t <= T; ++t)
    x[t - 1] = std::cos(oracle::kPi * static_cast<double>(j0) / static_cast<double>(T) * static_cast<double>(t));
  auto I = periodogram(x);
  const double peak = I[j0];
  I.erase(I.begin() + static_cast<long>(j0));
  std::nth_element(I.begin(), I.begin() + static_cast<long>(I.size() / 2), I.end());
  CHECK(peak >= 100.0 * I[I.size() / 2]);
}

TEST_CASE("normalized storage is scale free") {
  const auto x = oracle::gaussian_series(40, 5);
  std::vector<double> y = x;
  for (auto& v : y) v *= 4.0;
  const auto a = preperiodogram_modified(x);
  const auto b = preperiodogram_modified(y);
  CHECK(a.normalized == b.normalized);
  CHECK(b.scale == doctest::Approx(16.0 * a.scale).epsilon(1e-15));
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(preperiodogram_modified(std::vector<double>(4, 1.0)), ParameterError);
  std::vector<double> x(16, 1.0);
  x[3] = NAN;
  CHECK_THROWS_AS(preperiodogram_modified(x), DataError);
}
