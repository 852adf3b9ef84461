#include "tvspec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvspec/error.hpp"
#include "tvspec/parallel.hpp"
#include "tvspec/smoother.hpp"

namespace tvspec {

using Index = Eigen::Index;

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ParameterError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ErrorReport summarize_errors(std::vector<double> se) {
  if (se.empty()) throw ParameterError("no points left to evaluate");
  ErrorReport r;
  r.n_points = se.size();
  double sum = 0.0;
  for (double v : se) sum += v;
  r.mse = sum / static_cast<double>(se.size());
  std::sort(se.begin(), se.end());
  const std::array<double, 5> ps{0.0, 0.25, 0.5, 0.75, 1.0};
  for (std::size_t q = 0; q < ps.size(); ++q) {
    const double pos = ps[q] * static_cast<double>(se.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, se.size() - 1);
    r.se_quantiles[q] = se[lo] + (pos - static_cast<double>(lo)) * (se[hi] - se[lo]);
  }
  return r;
}

SquaredError squared_error(const Plane& est, const TruthFunction& truth, const Margin& margin) {
  const EstimationGrid& g = est.grid;
  if (est.values.rows() != static_cast<Index>(g.n_time()) || est.values.cols() != static_cast<Index>(g.n_freq()))
    throw GridMismatchError("plane values do not match its grid");
  SquaredError out;
  out.se = Matrix::Constant(est.values.rows(), est.values.cols(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> kept;
  kept.reserve(g.size());
  for (std::size_t i = 0; i < g.n_time(); ++i) {
    for (std::size_t l = 0; l < g.n_freq(); ++l) {
      const double u = g.u(i);
      const double lambda = g.lambda(l);
      if (!margin.contains(u, lambda)) continue;
      const double d = est.values(static_cast<Index>(i), static_cast<Index>(l)) - truth(u, lambda);
      out.se(static_cast<Index>(i), static_cast<Index>(l)) = d * d;
      kept.push_back(d * d);
    }
  }
  out.report = summarize_errors(std::move(kept));
  return out;
}

SquaredError squared_error(const Plane& est, const Plane& truth, const Margin& margin) {
  if (!(est.grid == truth.grid) || est.values.rows() != truth.values.rows() ||
      est.values.cols() != truth.values.cols())
    throw GridMismatchError("estimate and truth are on different grids");
  const EstimationGrid& g = est.grid;
  return squared_error(est, [&](double u, double lambda) {
    // Exact grid coordinates: recover indices from the coordinates of g.
    const auto s = static_cast<std::size_t>(std::llround(u * 2.0 * static_cast<double>(g.raw.T) - 2.0));
    const auto j = static_cast<std::size_t>(std::llround(lambda * static_cast<double>(g.raw.T) / kPi));
    return truth.values(static_cast<Index>(s / g.d_t), static_cast<Index>(j / g.d_f));
  }, margin);
}

Plane truth_plane(const sim::ModelSpec& spec, const EstimationGrid& grid) {
  Plane p;
  p.grid = grid;
  p.values.resize(static_cast<Index>(grid.n_time()), static_cast<Index>(grid.n_freq()));
  p.provenance = "truth " + std::string(sim::to_string(spec.kind));
  for (std::size_t i = 0; i < grid.n_time(); ++i)
    for (std::size_t l = 0; l < grid.n_freq(); ++l)
      p.values(static_cast<Index>(i), static_cast<Index>(l)) =
          sim::true_spectrum(spec, std::min(1.0, grid.u(i)), grid.lambda(l));
  return p;
}

std::vector<std::pair<double, double>> default_bandwidth_grid() {
  std::vector<std::pair<double, double>> out;
  for (int a = 0; a <= 8; ++a) {
    for (int b = 0; b <= 8; ++b) {
      const double bt = std::min(1.0, 0.05 * std::pow(1.25, a));
      const double bf = std::min(kTwoPi, kTwoPi * 0.05 * std::pow(1.25, b));
      out.emplace_back(bt, bf);
    }
  }
  return out;
}

OracleResult optimal_global_bandwidth(const RawPlane& raw, const TruthFunction& truth,
                                      const EstimationGrid& grid,
                                      const std::vector<std::pair<double, double>>& candidates,
                                      const Margin& margin) {
  if (candidates.empty()) throw ParameterError("empty bandwidth candidate set");
  OracleResult best;
  bool have = false;
  for (const auto& [bt, bf] : candidates) {
    Plane plane = smooth_nonadaptive(raw, bt, bf, grid);
    const ErrorReport rep = squared_error(plane, truth, margin).report;
    const bool better = !have || rep.mse < best.report.mse ||
                        (rep.mse == best.report.mse && bt * bf > best.bt * best.bf);
    if (better) {
      best.bt = bt;
      best.bf = bf;
      best.plane = std::move(plane);
      best.report = rep;
      have = true;
    }
  }
  best.plane.provenance = "oracle nonadaptive";
  return best;
}

std::vector<double> freq_average(const Plane& est) {
  std::vector<double> out(static_cast<std::size_t>(est.values.rows()));
  for (Index i = 0; i < est.values.rows(); ++i) out[static_cast<std::size_t>(i)] = est.values.row(i).mean();
  return out;
}

std::vector<double> time_axis(const EstimationGrid& grid) {
  std::vector<double> u(grid.n_time());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = grid.u(i);
  return u;
}

BreakEstimate detect_break(const std::vector<double>& curve, const std::vector<double>& u) {
  const std::size_t n = curve.size();
  if (n < 8) throw ParameterError("break detection needs at least 8 points");
  if (u.size() != n) throw ParameterError("curve and time axis differ in length");
  const std::size_t w = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.05 * static_cast<double>(n))));

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + curve[i];

  BreakEstimate out;
  out.statistic = -1.0;
  for (std::size_t i = w; i + w <= n; ++i) {
    const double left = (prefix[i] - prefix[i - w]) / static_cast<double>(w);
    const double right = (prefix[i + w] - prefix[i]) / static_cast<double>(w);
    const double stat = std::abs(right - left);
    if (stat > out.statistic) {
      out.statistic = stat;
      out.index = i;
    }
  }
  out.u_hat = 0.5 * (u[out.index - 1] + u[out.index]);

  std::vector<double> diffs(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) diffs[i] = std::abs(curve[i + 1] - curve[i]);
  // MAD of first differences of white noise: 0.6745 * sqrt(2) * sigma.
  out.noise = sample_quantile(std::move(diffs), 0.5) / (0.6744897501960817 * std::sqrt(2.0));
  out.low_confidence = out.statistic <= 3.0 * out.noise;
  return out;
}

double wigner_ville_truncated(const sim::ModelSpec& spec, double u, double lambda, long k_max) {
  if (k_max < 0) throw ParameterError("lag cap must be nonnegative");
  double sum = sim::local_autocovariance(spec, u, 0);
  for (long k = 1; k <= k_max; ++k)
    sum += 2.0 * sim::local_autocovariance(spec, u, k) * std::cos(static_cast<double>(k) * lambda);
  return sum / kTwoPi;
}

}  // namespace tvspec
