#pragma once

// Independent reference implementations used as test oracles. They follow the
// textbook definitions term by term and are deliberately slow.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "tvspec/kernels.hpp"
#include "tvspec/raw.hpp"
#include "tvspec/types.hpp"

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// C*(tau, k) straight from the case distinction: aligned product when
/// tau +- k/2 are integers, otherwise the mean of the two neighbouring
/// aligned products at tau -+ 1/2. Zero when any index leaves [1, T].
inline double cov_star(const std::vector<double>& x, double tau, long k) {
  const long T = static_cast<long>(x.size());
  auto X = [&](double t) -> double {
    const long i = std::lround(t);
    return (i >= 1 && i <= T) ? x[static_cast<std::size_t>(i - 1)] : NAN;
  };
  const double kk = static_cast<double>(std::labs(k));
  const double lo = tau - kk / 2.0;
  double v;
  if (std::abs(lo - std::round(lo)) < 1e-12) {
    v = X(lo) * X(tau + kk / 2.0);
  } else {
    const double a = X(tau - 0.5 - kk / 2.0) * X(tau - 0.5 + kk / 2.0);
    const double b = X(tau + 0.5 - kk / 2.0) * X(tau + 0.5 + kk / 2.0);
    v = 0.5 * (a + b);
  }
  return std::isnan(v) ? 0.0 : v;
}

/// (1/2pi) sum_{k=-(T-1)}^{T-1} C*(tau, k) e^{-i k lambda} by direct summation.
inline double preperiodogram(const std::vector<double>& x, double tau, double lambda) {
  const long T = static_cast<long>(x.size());
  std::complex<double> acc = 0.0;
  for (long k = -(T - 1); k <= T - 1; ++k)
    acc += cov_star(x, tau, k) * std::exp(std::complex<double>(0.0, -lambda * static_cast<double>(k)));
  return acc.real() / (2.0 * kPi);
}

/// |sum_t X_t e^{-i lambda t}|^2 / (2 pi T) by direct summation.
inline double periodogram(const std::vector<double>& x, double lambda) {
  std::complex<double> acc = 0.0;
  for (std::size_t t = 1; t <= x.size(); ++t)
    acc += x[t - 1] * std::exp(std::complex<double>(0.0, -lambda * static_cast<double>(t)));
  return std::norm(acc) / (2.0 * kPi * static_cast<double>(x.size()));
}

/// Epanechnikov-type kernel written independently of the library.
inline double K(double x) { return std::abs(x) <= 0.5 ? 1.5 - 6.0 * x * x : 0.0; }

/// Nonadaptive estimate at (u, lambda) by summation over every raw point and
/// every extended frequency index j' in [-T, 2T] (folded evenly).
inline double smooth(const tvspec::RawPlane& raw, double bt, double bf, double u, double lambda,
                     double* mass = nullptr) {
  const long T = static_cast<long>(raw.grid.T);
  double num = 0.0;
  double den = 0.0;
  for (long s = 0; s <= 2 * T - 2; ++s) {
    const double us = (static_cast<double>(s) + 2.0) / (2.0 * static_cast<double>(T));
    const double kt = K((u - us) / bt);
    if (kt == 0.0) continue;
    for (long j = -T; j <= 2 * T; ++j) {
      const double lj = kPi * static_cast<double>(j) / static_cast<double>(T);
      const double kf = K((lambda - lj) / bf);
      if (kf == 0.0) continue;
      long m = ((j % (2 * T)) + 2 * T) % (2 * T);
      if (m > T) m = 2 * T - m;
      const double w = kt * kf;
      num += w * raw.value(static_cast<std::size_t>(s), static_cast<std::size_t>(m));
      den += w;
    }
  }
  if (mass) *mass = den;
  return num / den;
}

inline std::vector<double> gaussian_series(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = nd(gen);
  return x;
}

inline double rel_diff(double a, double b) {
  const double d = std::abs(a - b);
  const double m = std::max(std::abs(a), std::abs(b));
  return m == 0.0 ? d : d / m;
}

}  // namespace oracle
