#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tvspec/sim.hpp"
#include "tvspec/types.hpp"

namespace tvspec {

/// Half-integer time x Fourier frequency grid of the pre-periodogram.
///
/// Time index s in [0, 2T-2] maps to tau = 1 + s/2 and rescaled time
/// u = tau / T. Frequency index j in [0, T] maps to lambda_j = pi j / T.
/// Frequencies outside [0, pi] are obtained by even, 2 pi-periodic folding.
struct RawGrid {
  std::size_t T = 0;

  std::size_t n_time() const { return 2 * T - 1; }
  std::size_t n_freq() const { return T + 1; }
  double tau(std::size_t s) const { return 1.0 + 0.5 * static_cast<double>(s); }
  double u(std::size_t s) const {
    return (static_cast<double>(s) + 2.0) / (2.0 * static_cast<double>(T));
  }
  double lambda(long j) const { return kPi * static_cast<double>(j) / static_cast<double>(T); }
  /// Index of a half-integer time point; throws ParameterError off-grid.
  std::size_t time_index(double tau) const;
  /// Maps an extended frequency index (any integer) onto [0, T].
  std::size_t fold(long j) const;

  bool operator==(const RawGrid&) const = default;
};

/// Modified pre-periodogram J(tau/T, lambda_j).
///
/// Values are stored as scale * normalized: the series is divided by its
/// largest absolute value before the lag products are formed, so two series
/// that differ by an exact positive factor share bit-identical normalized
/// planes.
struct RawPlane {
  RawGrid grid;
  Matrix normalized;  ///< (2T-1) x (T+1)
  double scale = 1.0;

  double value(std::size_t s, std::size_t j) const { return scale * normalized(s, j); }
  Matrix values() const { return scale * normalized; }
};

/// Preliminary covariance C*(tau, k) for half-integer tau and lag k >= 0.
double cov_star(std::span<const double> x, double tau, std::size_t k);

RawPlane preperiodogram_modified(std::span<const double> x);
inline RawPlane preperiodogram_modified(const sim::TimeSeries& series) {
  return preperiodogram_modified(std::span<const double>(series.values));
}

/// Classical floor-based pre-periodogram on integer times t = 1..T
/// (rows) and lambda_j, j = 0..T (columns).
Matrix preperiodogram_classic(std::span<const double> x);

/// I(lambda_j) = |sum_t X_t e^{-i lambda_j t}|^2 / (2 pi T), j = 0..T.
std::vector<double> periodogram(std::span<const double> x);

}  // namespace tvspec
