#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tvspec/grid.hpp"
#include "tvspec/kernels.hpp"
#include "tvspec/raw.hpp"

namespace tvspec {

/// Kernel-weighted sums of the normalized pre-periodogram over a rectangular
/// window, with an optional per-cell penalty factor.
///
/// Raw points are grouped into cells: all raw points whose nearest
/// estimation-grid point coincides (time cells x extended-frequency runs).
/// A penalty that depends only on that nearest estimation point is constant
/// on a cell. Because K_t and K_f are quadratic polynomials on their
/// support, the kernel-weighted sum over a cell that lies entirely inside the
/// support is an exact combination of nine precomputed centred moments.
/// Cells cut by the support boundary are summed point by point.
class WindowEngine {
public:
  struct Sums {
    double weighted = 0.0;  ///< sum of w * J (normalized units)
    double total = 0.0;     ///< sum of w
  };

  /// The raw plane must outlive the engine.
  WindowEngine(const RawPlane& raw, const EstimationGrid& grid);

  const EstimationGrid& grid() const { return grid_; }
  const RawPlane& raw() const { return *raw_; }

  /// Sum over raw points in the support of K_t((u - u_s)/bt) K_f((lambda - lambda_j)/bf).
  /// penalty(e) returns the factor applied to every raw point whose nearest
  /// estimation point has flat index e.
  template <class Penalty>
  Sums sum(double u, double lambda, double bt, double bf, Penalty&& penalty) const;

  Sums sum(double u, double lambda, double bt, double bf) const {
    return sum(u, lambda, bt, bf, [](std::size_t) { return 1.0; });
  }

  /// Flat estimation index of the raw point (s, fold(j')).
  std::size_t nearest_index(std::size_t s, std::size_t j_folded) const {
    return grid_.index(grid_.nearest_time(s), grid_.nearest_freq(j_folded));
  }

private:
  struct TimeCell {
    long lo;
    long hi;
    double center;
    std::array<double, 3> powers;  // sum over the cell of (s - center)^a
  };
  struct FreqRun {
    long lo;
    long hi;
    std::size_t l;
    double center;
    std::array<double, 3> powers;
  };
  struct Axis {
    bool full;
    long lo;
    long hi;
    std::array<double, 3> coef;
    double mass;  // coef . powers
  };

  const double* moments(std::size_t cell, std::size_t run) const {
    return &moments_[(cell * runs_.size() + run) * 9];
  }
  std::size_t run_of(long j) const { return run_index_[static_cast<std::size_t>(j + static_cast<long>(T_))]; }

  const RawPlane* raw_;
  EstimationGrid grid_;
  std::size_t T_;
  std::vector<TimeCell> cells_;
  std::vector<FreqRun> runs_;
  std::vector<std::size_t> run_index_;  // extended j' + T -> run
  std::vector<double> moments_;         // [cell][run][a * 3 + c]
};

template <class Penalty>
WindowEngine::Sums WindowEngine::sum(double u, double lambda, double bt, double bf,
                                     Penalty&& penalty) const {
  Sums out;
  const RawGrid& rg = raw_->grid;
  const IndexRange ts = time_support(rg, u, bt);
  const IndexRange fs = freq_support(rg, lambda, bf);
  if (ts.empty() || fs.empty()) return out;

  thread_local std::vector<double> kt;
  thread_local std::vector<double> kf;
  thread_local std::vector<std::size_t> fold;
  thread_local std::vector<Axis> time_axis;
  thread_local std::vector<Axis> freq_axis;

  kt.resize(static_cast<std::size_t>(ts.size()));
  for (long s = ts.lo; s <= ts.hi; ++s)
    kt[static_cast<std::size_t>(s - ts.lo)] = kernel_quadratic((u - rg.u(static_cast<std::size_t>(s))) / bt);
  kf.resize(static_cast<std::size_t>(fs.size()));
  fold.resize(static_cast<std::size_t>(fs.size()));
  for (long j = fs.lo; j <= fs.hi; ++j) {
    kf[static_cast<std::size_t>(j - fs.lo)] = kernel_quadratic((lambda - rg.lambda(j)) / bf);
    fold[static_cast<std::size_t>(j - fs.lo)] = rg.fold(j);
  }

  const double twoT = 2.0 * static_cast<double>(T_);
  const double h = 1.0 / (twoT * bt);
  const std::size_t first_cell = grid_.nearest_time(static_cast<std::size_t>(ts.lo));
  const std::size_t last_cell = grid_.nearest_time(static_cast<std::size_t>(ts.hi));
  time_axis.clear();
  for (std::size_t i = first_cell; i <= last_cell; ++i) {
    const TimeCell& c = cells_[i];
    Axis a{};
    a.lo = std::max(c.lo, ts.lo);
    a.hi = std::min(c.hi, ts.hi);
    a.full = a.lo == c.lo && a.hi == c.hi;
    if (a.full) {
      const double xc = (u - (c.center + 2.0) / twoT) / bt;
      a.coef = {6.0 * (0.25 - xc * xc), 12.0 * xc * h, -6.0 * h * h};
      a.mass = a.coef[0] * c.powers[0] + a.coef[1] * c.powers[1] + a.coef[2] * c.powers[2];
    }
    time_axis.push_back(a);
  }

  const double g = kPi / (static_cast<double>(T_) * bf);
  const std::size_t first_run = run_of(fs.lo);
  const std::size_t last_run = run_of(fs.hi);
  freq_axis.clear();
  for (std::size_t r = first_run; r <= last_run; ++r) {
    const FreqRun& c = runs_[r];
    Axis a{};
    a.lo = std::max(c.lo, fs.lo);
    a.hi = std::min(c.hi, fs.hi);
    a.full = a.lo == c.lo && a.hi == c.hi;
    if (a.full) {
      const double yc = (lambda - kPi * c.center / static_cast<double>(T_)) / bf;
      a.coef = {6.0 * (0.25 - yc * yc), 12.0 * yc * g, -6.0 * g * g};
      a.mass = a.coef[0] * c.powers[0] + a.coef[1] * c.powers[1] + a.coef[2] * c.powers[2];
    }
    freq_axis.push_back(a);
  }

  const std::size_t nf = grid_.n_freq();
  const Matrix& J = raw_->normalized;
  for (std::size_t ci = 0; ci < time_axis.size(); ++ci) {
    const Axis& ta = time_axis[ci];
    const std::size_t cell = first_cell + ci;
    for (std::size_t ri = 0; ri < freq_axis.size(); ++ri) {
      const Axis& fa = freq_axis[ri];
      const std::size_t run = first_run + ri;
      const double factor = penalty(cell * nf + runs_[run].l);
      if (factor == 0.0) continue;
      if (ta.full && fa.full) {
        const double* m = moments(cell, run);
        const double c0 = ta.coef[0] * m[0] + ta.coef[1] * m[3] + ta.coef[2] * m[6];
        const double c1 = ta.coef[0] * m[1] + ta.coef[1] * m[4] + ta.coef[2] * m[7];
        const double c2 = ta.coef[0] * m[2] + ta.coef[1] * m[5] + ta.coef[2] * m[8];
        out.weighted += factor * (fa.coef[0] * c0 + fa.coef[1] * c1 + fa.coef[2] * c2);
        out.total += factor * (ta.mass * fa.mass);
      } else {
        double ws = 0.0;
        double wt = 0.0;
        for (long s = ta.lo; s <= ta.hi; ++s) {
          const double k_s = kt[static_cast<std::size_t>(s - ts.lo)];
          const double* row = J.data() + static_cast<std::ptrdiff_t>(s) * J.cols();
          for (long j = fa.lo; j <= fa.hi; ++j) {
            const std::size_t idx = static_cast<std::size_t>(j - fs.lo);
            const double w = k_s * kf[idx];
            ws += w * row[fold[idx]];
            wt += w;
          }
        }
        out.weighted += factor * ws;
        out.total += factor * wt;
      }
    }
  }
  return out;
}

}  // namespace tvspec
