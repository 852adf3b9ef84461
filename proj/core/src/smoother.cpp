#include "tvspec/smoother.hpp"

#include <string>
#include <vector>

#include "tvspec/error.hpp"
#include "tvspec/kernels.hpp"
#include "tvspec/parallel.hpp"
#include "tvspec/window_engine.hpp"

namespace tvspec {
namespace {

void check_bandwidths(double bt, double bf) {
  if (!(bt > 0.0) || !(bf > 0.0)) throw ParameterError("bandwidths must be positive");
}

double time_mass(const RawGrid& g, double u, double bt) {
  const IndexRange r = time_support(g, u, bt);
  double m = 0.0;
  for (long s = r.lo; s <= r.hi; ++s) m += kernel_quadratic((u - g.u(static_cast<std::size_t>(s))) / bt);
  return m;
}

double freq_mass(const RawGrid& g, double lambda, double bf) {
  const IndexRange r = freq_support(g, lambda, bf);
  double m = 0.0;
  for (long j = r.lo; j <= r.hi; ++j) m += kernel_quadratic((lambda - g.lambda(j)) / bf);
  return m;
}

}  // namespace

Plane smooth_nonadaptive(const RawPlane& raw, double bt, double bf, const EstimationGrid& grid) {
  check_bandwidths(bt, bf);
  if (!(grid.raw == raw.grid)) throw GridMismatchError("estimation grid does not belong to this raw plane");
  const RawGrid& rg = raw.grid;
  const std::size_t nt = grid.n_time();
  const std::size_t nf = grid.n_freq();
  const Eigen::Index raw_cols = static_cast<Eigen::Index>(rg.n_freq());

  // Pass 1: time smoothing of every raw frequency column at the estimation times.
  Matrix time_smoothed(static_cast<Eigen::Index>(nt), raw_cols);
  std::vector<double> time_total(nt, 0.0);
  parallel_for(nt, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double u = grid.u(i);
      const IndexRange r = time_support(rg, u, bt);
      auto row = time_smoothed.row(static_cast<Eigen::Index>(i));
      row.setZero();
      double mass = 0.0;
      for (long s = r.lo; s <= r.hi; ++s) {
        const double w = kernel_quadratic((u - rg.u(static_cast<std::size_t>(s))) / bt);
        mass += w;
        row += w * raw.normalized.row(s);
      }
      time_total[i] = mass;
    }
  });

  // Pass 2: frequency smoothing with even periodic folding.
  Plane out;
  out.grid = grid;
  out.values.resize(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nf));
  out.provenance = "nonadaptive bt=" + std::to_string(bt) + " bf=" + std::to_string(bf);
  std::vector<double> kf;
  std::vector<std::size_t> folded;
  for (std::size_t l = 0; l < nf; ++l) {
    const double lambda = grid.lambda(l);
    const IndexRange r = freq_support(rg, lambda, bf);
    kf.clear();
    folded.clear();
    double mass = 0.0;
    for (long j = r.lo; j <= r.hi; ++j) {
      kf.push_back(kernel_quadratic((lambda - rg.lambda(j)) / bf));
      folded.push_back(rg.fold(j));
      mass += kf.back();
    }
    for (std::size_t i = 0; i < nt; ++i) {
      const double total = time_total[i] * mass;
      if (!(total > 0.0)) throw BandwidthTooSmallError("smoothing window contains no raw points");
      double acc = 0.0;
      for (std::size_t q = 0; q < kf.size(); ++q)
        acc += kf[q] * time_smoothed(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(folded[q]));
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = raw.scale * (acc / total);
    }
  }
  return out;
}

Plane smooth_nonadaptive(const RawPlane& raw, const Matrix& bt, const Matrix& bf,
                         const EstimationGrid& grid) {
  if (!(grid.raw == raw.grid)) throw GridMismatchError("estimation grid does not belong to this raw plane");
  const auto nt = static_cast<Eigen::Index>(grid.n_time());
  const auto nf = static_cast<Eigen::Index>(grid.n_freq());
  if (bt.rows() != nt || bt.cols() != nf || bf.rows() != nt || bf.cols() != nf)
    throw GridMismatchError("bandwidth planes do not match the estimation grid");
  const WindowEngine engine(raw, grid);
  Plane out;
  out.grid = grid;
  out.values.resize(nt, nf);
  out.provenance = "nonadaptive pointwise";
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const std::size_t i = p / grid.n_freq();
      const std::size_t l = p % grid.n_freq();
      const double b_t = bt(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l));
      const double b_f = bf(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l));
      check_bandwidths(b_t, b_f);
      const auto sums = engine.sum(grid.u(i), grid.lambda(l), b_t, b_f);
      if (!(sums.total > 0.0)) throw BandwidthTooSmallError("smoothing window contains no raw points");
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
          raw.scale * (sums.weighted / sums.total);
    }
  });
  return out;
}

double weight_sum(double bt, double bf, double u, double lambda, const RawGrid& grid) {
  check_bandwidths(bt, bf);
  const double total = time_mass(grid, u, bt) * freq_mass(grid, lambda, bf);
  if (!(total > 0.0)) throw BandwidthTooSmallError("smoothing window contains no raw points");
  return total;
}

Matrix weight_sum_plane(double bt, double bf, const EstimationGrid& grid) {
  check_bandwidths(bt, bf);
  Matrix out(static_cast<Eigen::Index>(grid.n_time()), static_cast<Eigen::Index>(grid.n_freq()));
  std::vector<double> fm(grid.n_freq());
  for (std::size_t l = 0; l < grid.n_freq(); ++l) fm[l] = freq_mass(grid.raw, grid.lambda(l), bf);
  for (std::size_t i = 0; i < grid.n_time(); ++i) {
    const double tm = time_mass(grid.raw, grid.u(i), bt);
    for (std::size_t l = 0; l < grid.n_freq(); ++l)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = tm * fm[l];
  }
  return out;
}

}  // namespace tvspec
