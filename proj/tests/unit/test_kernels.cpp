#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tvspec/error.hpp"
#include "tvspec/kernels.hpp"

using namespace tvspec;

TEST_CASE("localisation kernel values") {
  CHECK(kernel_quadratic(0.0) == 1.5);
  CHECK(kernel_quadratic(0.5) == 0.0);
  CHECK(kernel_quadratic(-0.5) == 0.0);
  CHECK(kernel_quadratic(0.7) == 0.0);
  CHECK(kernel_quadratic(0.25) == doctest::Approx(1.125));
}

TEST_CASE("localisation kernel integrates to one and kappa = 1.2") {
  using boost::math::quadrature::gauss_kronrod;
  const double mass = gauss_kronrod<double, 31>::integrate([](double x) { return kernel_quadratic(x); }, -0.5, 0.5);
  const double kappa = gauss_kronrod<double, 31>::integrate(
      [](double x) { return kernel_quadratic(x) * kernel_quadratic(x); }, -0.5, 0.5);
  CHECK(std::abs(mass - 1.0) <= 1e-12);
  CHECK(std::abs(kappa - 1.2) <= 1e-12);
  const KernelConstants c = default_kernel_constants();
  CHECK(std::abs(c.kappa_t - kappa) <= 1e-12);
  CHECK(std::abs(c.kappa_f - kappa) <= 1e-12);
}

TEST_CASE("penalty kernel") {
  KernelConstants c = default_kernel_constants();
  CHECK(kernel_penalty(0.0, 0, c) == 1.0);
  CHECK(kernel_penalty(c.c_pen, 0, c) == 0.0);
  CHECK(kernel_penalty(c.c_pen * std::pow(c.rho, 3), 3, c) == 0.0);
  CHECK(kernel_penalty(c.c_pen * 1.5, 0, c) == 0.0);
  c.c_pen = 5.411086;
  CHECK(kernel_penalty(2.705543, 0, c) == doctest::Approx(0.75).epsilon(1e-9));
  // The cutoff grows with k: a fixed statistic is penalised less later on.
  CHECK(kernel_penalty(2.0, 5, c) > kernel_penalty(2.0, 0, c));
}

TEST_CASE("memory kernel") {
  KernelConstants c = default_kernel_constants();
  CHECK(kernel_memory(0.0, 0, c) == 1.0);
  CHECK(kernel_memory(c.c_mem, 0, c) == 0.0);
  CHECK(kernel_memory(c.c_mem * std::pow(c.rho, -4), 4, c) == 0.0);
  c.c_mem = 2.646608;
  CHECK(kernel_memory(1.323304, 0, c) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(kernel_memory(c.c_mem * std::pow(c.rho, -2) / 2.0, 2, c) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("chi-square quantiles against the reference table") {
  CHECK(std::abs(chi2_quantile_1df(0.5) - 0.454936) <= 1e-6);
  CHECK(std::abs(chi2_quantile_1df(0.75) - 1.323304) <= 1e-6);
  CHECK(std::abs(chi2_quantile_1df(0.9) - 2.705543) <= 1e-6);
  CHECK(std::abs(chi2_quantile_1df(0.99) - 6.634897) <= 1e-6);
}

TEST_CASE("chi-square and normal quantiles against boost") {
  const boost::math::chi_squared chi(1.0);
  const boost::math::normal nd;
  for (double p : {0.01, 0.1, 0.3, 0.5, 0.75, 0.9, 0.95, 0.99, 0.999}) {
    CHECK(chi2_quantile_1df(p) == doctest::Approx(boost::math::quantile(chi, p)).epsilon(1e-12));
    CHECK(normal_quantile(p) == doctest::Approx(boost::math::quantile(nd, p)).epsilon(1e-13).scale(1e-15));
  }
  for (double p : {1e-10, 1e-5, 1.0 - 1e-7})
    CHECK(normal_quantile(p) == doctest::Approx(boost::math::quantile(nd, p)).epsilon(1e-13));
  CHECK_THROWS_AS(normal_quantile(0.0), ParameterError);
  CHECK_THROWS_AS(normal_quantile(1.0), ParameterError);
}

TEST_CASE("default cutoffs") {
  const KernelConstants c = default_kernel_constants();
  CHECK(c.c_pen == doctest::Approx(5.411086).epsilon(1e-6));
  CHECK(c.c_mem == doctest::Approx(2.646608).epsilon(1e-6));
  CHECK(c.rho == 1.02);
}
