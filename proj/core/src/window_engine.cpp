#include "tvspec/window_engine.hpp"

namespace tvspec {

WindowEngine::WindowEngine(const RawPlane& raw, const EstimationGrid& grid)
    : raw_(&raw), grid_(grid), T_(raw.grid.T) {
  grid_.raw = raw.grid;
  const long n_time = static_cast<long>(raw.grid.n_time());
  const long T = static_cast<long>(T_);

  cells_.resize(grid_.n_time());
  for (auto& c : cells_) {
    c.lo = n_time;
    c.hi = -1;
  }
  for (long s = 0; s < n_time; ++s) {
    TimeCell& c = cells_[grid_.nearest_time(static_cast<std::size_t>(s))];
    c.lo = std::min(c.lo, s);
    c.hi = std::max(c.hi, s);
  }
  for (auto& c : cells_) {
    c.center = 0.5 * static_cast<double>(c.lo + c.hi);
    c.powers = {0.0, 0.0, 0.0};
    for (long s = c.lo; s <= c.hi; ++s) {
      const double d = static_cast<double>(s) - c.center;
      c.powers[0] += 1.0;
      c.powers[1] += d;
      c.powers[2] += d * d;
    }
  }

  run_index_.resize(static_cast<std::size_t>(3 * T + 1));
  for (long j = -T; j <= 2 * T; ++j) {
    const std::size_t l = grid_.nearest_freq(raw.grid.fold(j));
    if (runs_.empty() || runs_.back().l != l) runs_.push_back(FreqRun{j, j, l, 0.0, {}});
    runs_.back().hi = j;
    run_index_[static_cast<std::size_t>(j + T)] = runs_.size() - 1;
  }
  for (auto& r : runs_) {
    r.center = 0.5 * static_cast<double>(r.lo + r.hi);
    r.powers = {0.0, 0.0, 0.0};
    for (long j = r.lo; j <= r.hi; ++j) {
      const double d = static_cast<double>(j) - r.center;
      r.powers[0] += 1.0;
      r.powers[1] += d;
      r.powers[2] += d * d;
    }
  }

  moments_.assign(cells_.size() * runs_.size() * 9, 0.0);
  const Matrix& J = raw.normalized;
  std::vector<double> row_moments(runs_.size() * 3);
  for (long s = 0; s < n_time; ++s) {
    std::fill(row_moments.begin(), row_moments.end(), 0.0);
    for (std::size_t r = 0; r < runs_.size(); ++r) {
      const FreqRun& run = runs_[r];
      for (long j = run.lo; j <= run.hi; ++j) {
        const double d = static_cast<double>(j) - run.center;
        const double v = J(s, static_cast<Eigen::Index>(raw.grid.fold(j)));
        row_moments[3 * r] += v;
        row_moments[3 * r + 1] += d * v;
        row_moments[3 * r + 2] += d * d * v;
      }
    }
    const std::size_t cell = grid_.nearest_time(static_cast<std::size_t>(s));
    const double d = static_cast<double>(s) - cells_[cell].center;
    const double pw[3] = {1.0, d, d * d};
    for (std::size_t r = 0; r < runs_.size(); ++r) {
      double* m = &moments_[(cell * runs_.size() + r) * 9];
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) m[a * 3 + c] += pw[a] * row_moments[3 * r + static_cast<std::size_t>(c)];
    }
  }
}

}  // namespace tvspec
