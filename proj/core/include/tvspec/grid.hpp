#pragma once

#include <cstddef>
#include <string>

#include "tvspec/raw.hpp"
#include "tvspec/types.hpp"

namespace tvspec {

/// Inclusive index range; empty when lo > hi.
struct IndexRange {
  long lo = 0;
  long hi = -1;
  bool empty() const { return lo > hi; }
  long size() const { return empty() ? 0 : hi - lo + 1; }
};

/// Raw time indices s with |u - u_s| <= b_t / 2 (support of K_t((u - u_s) / b_t)),
/// clipped to the observed range.
IndexRange time_support(const RawGrid& grid, double u, double bt);

/// Extended frequency indices j' in [-T, 2T] with |lambda - lambda_j'| <= b_f / 2.
/// Values at j' are read from fold(j').
IndexRange freq_support(const RawGrid& grid, double lambda, double bf);

/// Subset of the raw grid on which estimates are produced: every d_t-th raw
/// time point and every d_f-th Fourier frequency, starting at index 0.
struct EstimationGrid {
  RawGrid raw;
  std::size_t d_t = 1;
  std::size_t d_f = 1;

  static EstimationGrid full(const RawGrid& raw) { return {raw, 1, 1}; }
  /// Decimation keeping roughly 128 points along each axis.
  static EstimationGrid automatic(const RawGrid& raw);

  std::size_t n_time() const { return (raw.n_time() - 1) / d_t + 1; }
  std::size_t n_freq() const { return (raw.n_freq() - 1) / d_f + 1; }
  std::size_t size() const { return n_time() * n_freq(); }
  std::size_t index(std::size_t i, std::size_t l) const { return i * n_freq() + l; }

  std::size_t raw_time(std::size_t i) const { return i * d_t; }
  std::size_t raw_freq(std::size_t l) const { return l * d_f; }
  double u(std::size_t i) const { return raw.u(raw_time(i)); }
  double lambda(std::size_t l) const { return raw.lambda(static_cast<long>(raw_freq(l))); }

  /// Nearest estimation index for a raw index (ties go to the later point).
  std::size_t nearest_time(std::size_t s) const;
  std::size_t nearest_freq(std::size_t j) const;

  bool operator==(const EstimationGrid&) const = default;
};

/// Spectral estimate on an estimation grid.
struct Plane {
  EstimationGrid grid;
  Matrix values;  ///< n_time x n_freq
  std::string provenance;
};

}  // namespace tvspec
