#include "tvspec/adaptive.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "tvspec/error.hpp"
#include "tvspec/parallel.hpp"
#include "tvspec/smoother.hpp"
#include "tvspec/window_engine.hpp"

namespace tvspec {
namespace {

constexpr double kDenominatorFloor = 1e-12;

using Index = Eigen::Index;

/// Linear-interpolation (type 7) quantile.
double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

double quantile(const Matrix& m, double p) {
  return quantile(std::vector<double>(m.data(), m.data() + m.size()), p);
}

/// K_st inlined for the hot loop: [1 - (x / cut)^2] on [0, cut).
inline double penalty_weight(double x, double cut) {
  if (x >= cut) return 0.0;
  const double r = x / cut;
  return 1.0 - r * r;
}

Matrix filled(const EstimationGrid& g, double v) {
  return Matrix::Constant(static_cast<Index>(g.n_time()), static_cast<Index>(g.n_freq()), v);
}

BoxBandwidths box_bandwidths(const EstimatorConfig& cfg, const EstimationGrid& grid, double q_init,
                             double q_prev) {
  const double twoT = 2.0 * static_cast<double>(grid.raw.T);
  const double floor_t = std::max(3.0, static_cast<double>(grid.d_t)) / twoT;
  const double floor_f = std::max(3.0, static_cast<double>(grid.d_f)) * kPi / static_cast<double>(grid.raw.T);
  const double ratio = q_prev > 0.0 ? q_init / q_prev : 1.0;
  return {std::max(cfg.b_star_t0 * ratio, floor_t), std::max(cfg.b_star_f0 * ratio, floor_f),
          std::max(cfg.b_sstar_t0 * ratio, floor_t), std::max(cfg.b_sstar_f0 * ratio, floor_f)};
}

std::size_t nearest_estimation_time(const EstimationGrid& g, double u) {
  const double s = u * 2.0 * static_cast<double>(g.raw.T) - 2.0;
  const double i = std::round(s / static_cast<double>(g.d_t));
  return static_cast<std::size_t>(std::clamp(i, 0.0, static_cast<double>(g.n_time() - 1)));
}

std::size_t nearest_estimation_freq(const EstimationGrid& g, double lambda) {
  const double j = lambda * static_cast<double>(g.raw.T) / kPi;
  const double l = std::round(j / static_cast<double>(g.d_f));
  return static_cast<std::size_t>(std::clamp(l, 0.0, static_cast<double>(g.n_freq() - 1)));
}

}  // namespace

double effective_bandwidth(double n_hat, double mass, double bt, double bf) {
  if (!(mass > 0.0)) throw BandwidthTooSmallError("search window contains no raw points");
  return std::sqrt(bt * bf / kTwoPi) * std::sqrt(n_hat / mass);
}

double denominator_bar_f(const Matrix& f, const EstimationGrid& grid, std::size_t i, std::size_t l,
                         double box_t, double box_f) {
  const double u = grid.u(i);
  const double lambda = grid.lambda(l);
  // Box bounds on estimation indices, settled on the exact predicate.
  auto in_t = [&](std::size_t a) { return std::abs(grid.u(a) - u) <= box_t; };
  auto in_f = [&](std::size_t b) { return std::abs(grid.lambda(b) - lambda) <= box_f; };
  std::size_t t_lo = i, t_hi = i, f_lo = l, f_hi = l;
  while (t_lo > 0 && in_t(t_lo - 1)) --t_lo;
  while (t_hi + 1 < grid.n_time() && in_t(t_hi + 1)) ++t_hi;
  while (f_lo > 0 && in_f(f_lo - 1)) --f_lo;
  while (f_hi + 1 < grid.n_freq() && in_f(f_hi + 1)) ++f_hi;

  const double n = static_cast<double>((t_hi - t_lo + 1) * (f_hi - f_lo + 1));
  double abs_sum = 0.0;
  for (std::size_t a = t_lo; a <= t_hi; ++a)
    for (std::size_t b = f_lo; b <= f_hi; ++b) abs_sum += std::abs(f(static_cast<Index>(a), static_cast<Index>(b)));
  const double mean = abs_sum / n;
  double sq = 0.0;
  for (std::size_t a = t_lo; a <= t_hi; ++a)
    for (std::size_t b = f_lo; b <= f_hi; ++b) {
      const double d = f(static_cast<Index>(a), static_cast<Index>(b)) - mean;
      sq += d * d;
    }
  const double out = mean + std::sqrt(sq / n);
  return out > 0.0 ? out : kDenominatorFloor;
}

Matrix denominator_plane(const Matrix& f, const EstimationGrid& grid, double box_t, double box_f) {
  Matrix out(static_cast<Index>(grid.n_time()), static_cast<Index>(grid.n_freq()));
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const std::size_t i = p / grid.n_freq();
      const std::size_t l = p % grid.n_freq();
      out(static_cast<Index>(i), static_cast<Index>(l)) = denominator_bar_f(f, grid, i, l, box_t, box_f);
    }
  });
  return out;
}

double penalty_coefficient(double n, double bar_f, std::size_t T, const KernelConstants& consts,
                           double penalty_scale) {
  return penalty_scale * n /
         (kTwoPi * consts.kappa_t * consts.kappa_f * static_cast<double>(T) * bar_f * bar_f);
}

double penalty_statistic(double n_aux, double f1, double f2, double bar_f, std::size_t T,
                         const KernelConstants& consts, double penalty_scale) {
  const double d = f1 - f2;
  return penalty_coefficient(n_aux, bar_f, T, consts, penalty_scale) * d * d;
}

double memory_statistic(double n_candidate, double f_aux, double f_prev, double bar_f, std::size_t T,
                        const KernelConstants& consts, double penalty_scale) {
  return penalty_statistic(n_candidate, f_aux, f_prev, bar_f, T, consts, penalty_scale);
}

AuxiliaryPlane penalty_step(const AdaptiveState& prev, const RawPlane& raw, const EstimationGrid& grid,
                            const EstimatorConfig& config, int k, const BoxBandwidths& boxes) {
  const KernelConstants consts = config.kernel_constants();
  const std::size_t T = grid.raw.T;
  const Matrix bar = denominator_plane(prev.f_hat, grid, boxes.pen_t, boxes.pen_f);
  const double cut = consts.c_pen * std::pow(consts.rho, k);

  AuxiliaryPlane aux;
  aux.f_aux = filled(grid, 0.0);
  aux.n_aux = filled(grid, 0.0);
  aux.search_bt = filled(grid, 0.0);
  aux.search_bf = filled(grid, 0.0);
  aux.pen_coef = filled(grid, 0.0);
  aux.separated = FlagMatrix::Zero(static_cast<Index>(grid.n_time()), static_cast<Index>(grid.n_freq()));

  const WindowEngine engine(raw, grid);
  const double* g = prev.f_hat.data();
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto i = static_cast<Index>(p / grid.n_freq());
      const auto l = static_cast<Index>(p % grid.n_freq());
      double bt = 0.0;
      double bf = 0.0;
      if (k > 0 && prev.neg_flag(i, l)) {
        bt = std::min(1.0, consts.rho * prev.search_bt(i, l));
        bf = std::min(kTwoPi, consts.rho * prev.search_bf(i, l));
      } else {
        const double b = prev.b_eff(i, l);
        bt = std::min(1.0, config.gamma_t * b);
        bf = std::min(kTwoPi, kTwoPi * config.gamma_f * b);
      }
      const double coef = penalty_coefficient(prev.n_aux(i, l), bar(i, l), T, consts, config.penalty_scale);
      const double gp = g[p];
      const auto sums = engine.sum(grid.u(static_cast<std::size_t>(i)), grid.lambda(static_cast<std::size_t>(l)),
                                   bt, bf, [&](std::size_t e) {
                                     const double d = gp - g[e];
                                     return penalty_weight(coef * d * d, cut);
                                   });
      aux.search_bt(i, l) = bt;
      aux.search_bf(i, l) = bf;
      aux.pen_coef(i, l) = coef;
      if (sums.total > 0.0) {
        aux.f_aux(i, l) = sums.weighted / sums.total;
        aux.n_aux(i, l) = sums.total;
      } else {
        aux.f_aux(i, l) = gp;
        aux.n_aux(i, l) = prev.n_hat(i, l);
        aux.separated(i, l) = 1;
      }
    }
  });
  return aux;
}

AdaptiveState memory_step(const AuxiliaryPlane& aux, const AdaptiveState& prev, const EstimationGrid& grid,
                          const EstimatorConfig& config, int k, const BoxBandwidths& boxes) {
  const KernelConstants consts = config.kernel_constants();
  const std::size_t T = grid.raw.T;
  const Matrix bar = denominator_plane(prev.f_hat, grid, boxes.mem_t, boxes.mem_f);
  const double eta = config.eta;

  AdaptiveState next;
  next.f_hat = filled(grid, 0.0);
  next.n_hat = filled(grid, 0.0);
  next.b_eff = filled(grid, 0.0);
  next.theta = filled(grid, 0.0);
  next.neg_flag = FlagMatrix::Zero(static_cast<Index>(grid.n_time()), static_cast<Index>(grid.n_freq()));
  next.search_bt = aux.search_bt;
  next.search_bf = aux.search_bf;
  next.n_aux = aux.n_aux;

  for (Index i = 0; i < next.f_hat.rows(); ++i) {
    for (Index l = 0; l < next.f_hat.cols(); ++l) {
      const double ft = aux.f_aux(i, l);
      const double nt = aux.n_aux(i, l);
      const double fp = prev.f_hat(i, l);
      const double np = prev.n_hat(i, l);
      double theta = 1.0;
      if (ft < 0.0 && ft < fp) {
        next.neg_flag(i, l) = 1;
      } else {
        const double n_candidate = (1.0 - eta) * nt + eta * np;
        const double stat = memory_statistic(n_candidate, ft, fp, bar(i, l), T, consts, config.penalty_scale);
        theta = 1.0 - (1.0 - eta) * kernel_memory(stat, k, consts);
      }
      double n_new = 0.0;
      double f_new = 0.0;
      if (theta == 1.0) {
        n_new = np;
        f_new = fp;
      } else if (theta == 0.0) {
        n_new = nt;
        f_new = ft;
      } else {
        n_new = (1.0 - theta) * nt + theta * np;
        f_new = ((1.0 - theta) * nt * ft + theta * np * fp) / n_new;
      }
      next.theta(i, l) = theta;
      next.n_hat(i, l) = n_new;
      next.f_hat(i, l) = f_new;
      if (theta == 1.0) {
        next.b_eff(i, l) = prev.b_eff(i, l);
      } else {
        const double bt = aux.search_bt(i, l);
        const double bf = aux.search_bf(i, l);
        const double mass = weight_sum(bt, bf, grid.u(static_cast<std::size_t>(i)),
                                       grid.lambda(static_cast<std::size_t>(l)), grid.raw);
        next.b_eff(i, l) = effective_bandwidth(n_new, mass, bt, bf);
      }
    }
  }
  return next;
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::growth_stall: return "growth_stall";
    case StopReason::bias_dispersion: return "bias_dispersion";
    case StopReason::hard_cap: return "hard_cap";
  }
  return "none";
}

StopReason stopping_check(IterationDiagnostics& diag, const AdaptiveState& state, const AdaptiveState& prev,
                          const EstimatorConfig& config, std::size_t T) {
  const Matrix growth = state.n_hat.cwiseQuotient(prev.n_hat);
  diag.mean_growth = growth.mean();
  diag.growth_q25 = quantile(growth, 0.25);
  diag.growth_q75 = quantile(growth, 0.75);
  diag.b_eff_min = state.b_eff.minCoeff();
  diag.b_eff_q25 = quantile(state.b_eff, 0.25);
  diag.b_eff_q75 = quantile(state.b_eff, 0.75);
  diag.count_negative = static_cast<std::size_t>((state.f_hat.array() < 0.0).count());
  diag.count_full_memory = static_cast<std::size_t>((state.theta.array() == 1.0).count());

  const double g = config.gamma_t * config.gamma_f;
  StopReason reason = StopReason::none;
  if (diag.mean_growth <= std::pow(g, 0.25)) {
    reason = StopReason::growth_stall;
  } else if (diag.b_eff_min >= std::pow(static_cast<double>(T), config.bias_exponent) &&
             diag.growth_q75 - diag.growth_q25 > 0.1 * g) {
    reason = StopReason::bias_dispersion;
  } else if (diag.k + 1 >= config.k_hard) {
    reason = StopReason::hard_cap;
  }
  diag.stop_reason = reason;
  return reason;
}

RunResult run_adaptive(const RawPlane& raw, const EstimatorConfig& config) {
  const std::size_t T = raw.grid.T;
  const EstimatorConfig cfg = config.resolved(T);
  cfg.validate();
  const EstimationGrid grid = cfg.estimation_grid(raw.grid);

  // All iterations run on the normalized plane; physical values are scale * normalized.
  const RawPlane unit{raw.grid, raw.normalized, 1.0};

  AdaptiveState state;
  state.f_hat = smooth_nonadaptive(unit, cfg.b_t0, cfg.b_f0, grid).values;
  state.n_hat = weight_sum_plane(cfg.b_t0, cfg.b_f0, grid);
  state.b_eff = filled(grid, std::sqrt(cfg.b_t0 * cfg.b_f0 / kTwoPi));
  state.theta = filled(grid, 0.0);
  state.neg_flag = FlagMatrix::Zero(static_cast<Index>(grid.n_time()), static_cast<Index>(grid.n_freq()));
  state.search_bt = filled(grid, cfg.b_t0);
  state.search_bf = filled(grid, cfg.b_f0);
  state.n_aux = state.n_hat;

  RunResult result;
  result.config = cfg;
  result.raw_grid = raw.grid;
  result.raw_scale = raw.scale;

  auto snapshot = [&](int k, const AdaptiveState& s, const Matrix* pen_coef) {
    IterationSnapshot snap;
    snap.k = k;
    snap.f_hat = raw.scale * s.f_hat;
    snap.n_hat = s.n_hat;
    snap.n_aux = s.n_aux;
    snap.theta = s.theta;
    snap.search_bt = s.search_bt;
    snap.search_bf = s.search_bf;
    if (pen_coef) snap.pen_coef = *pen_coef;
    snap.neg_flag = s.neg_flag;
    return snap;
  };
  if (cfg.keep_history) result.history.push_back(snapshot(-1, state, nullptr));

  const double q_init = quantile(state.b_eff, cfg.q);
  for (int k = 0;; ++k) {
    const auto start = std::chrono::steady_clock::now();
    const BoxBandwidths boxes = box_bandwidths(cfg, grid, q_init, quantile(state.b_eff, cfg.q));
    const AuxiliaryPlane aux = penalty_step(state, unit, grid, cfg, k, boxes);
    AdaptiveState next = memory_step(aux, state, grid, cfg, k, boxes);

    IterationDiagnostics diag;
    diag.k = k;
    diag.count_separated = static_cast<std::size_t>((aux.separated.array() != 0).count());
    const StopReason reason = stopping_check(diag, next, state, cfg, T);
    diag.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.diagnostics.push_back(diag);
    if (cfg.keep_history) result.history.push_back(snapshot(k, next, &aux.pen_coef));
    state = std::move(next);
    if (reason != StopReason::none) break;
  }

  result.final.grid = grid;
  result.final.values = raw.scale * state.f_hat;
  result.final.provenance = "adaptive";
  result.final_theta = state.theta;
  result.final_n_hat = state.n_hat;
  result.final_search_bt = state.search_bt;
  result.final_search_bf = state.search_bf;
  return result;
}

KernelMap reconstruct_kernel(const RunResult& result, double u, double lambda) {
  if (result.history.empty()) throw UnavailableError("run result carries no iteration history");
  const EstimationGrid& grid = result.final.grid;
  const RawGrid& rg = result.raw_grid;
  const KernelConstants consts = result.config.kernel_constants();

  KernelMap map;
  map.i = nearest_estimation_time(grid, u);
  map.l = nearest_estimation_freq(grid, lambda);
  map.u = grid.u(map.i);
  map.lambda = grid.lambda(map.l);
  const auto pi = static_cast<Index>(map.i);
  const auto pl = static_cast<Index>(map.l);
  const auto rows = static_cast<Index>(rg.n_time());
  const auto cols = static_cast<Index>(rg.n_freq());

  // Unpenalized localisation kernel at bandwidths (bt, bf), folded onto [0, pi],
  // with an optional factor per raw point.
  auto localisation = [&](double bt, double bf, auto&& factor) {
    Matrix w = Matrix::Zero(rows, cols);
    const IndexRange ts = time_support(rg, map.u, bt);
    const IndexRange fs = freq_support(rg, map.lambda, bf);
    for (long s = ts.lo; s <= ts.hi; ++s) {
      const double kt = kernel_quadratic((map.u - rg.u(static_cast<std::size_t>(s))) / bt);
      for (long j = fs.lo; j <= fs.hi; ++j) {
        const double kf = kernel_quadratic((map.lambda - rg.lambda(j)) / bf);
        const std::size_t jf = rg.fold(j);
        w(s, static_cast<Index>(jf)) += kt * kf * factor(static_cast<std::size_t>(s), jf);
      }
    }
    return w;
  };

  const IterationSnapshot& init = result.history.front();
  Matrix weights = localisation(init.search_bt(pi, pl), init.search_bf(pi, pl),
                                [](std::size_t, std::size_t) { return 1.0; });
  map.penalty = Matrix::Zero(rows, cols);
  const double inv_scale = result.raw_scale > 0.0 ? 1.0 / result.raw_scale : 1.0;
  for (std::size_t h = 1; h < result.history.size(); ++h) {
    const IterationSnapshot& snap = result.history[h];
    const IterationSnapshot& before = result.history[h - 1];
    const double coef = snap.pen_coef(pi, pl);
    const double cut = consts.c_pen * std::pow(consts.rho, snap.k);
    const double gp = before.f_hat(pi, pl) * inv_scale;
    Matrix pen = Matrix::Zero(rows, cols);
    auto factor = [&](std::size_t s, std::size_t jf) {
      const std::size_t e_i = grid.nearest_time(s);
      const std::size_t e_l = grid.nearest_freq(jf);
      const double d = gp - before.f_hat(static_cast<Index>(e_i), static_cast<Index>(e_l)) * inv_scale;
      const double w = penalty_weight(coef * d * d, cut);
      pen(static_cast<Index>(s), static_cast<Index>(jf)) = w;
      return w;
    };
    Matrix aux = localisation(snap.search_bt(pi, pl), snap.search_bf(pi, pl), factor);
    if (!(aux.sum() > 0.0)) aux = weights;
    const double theta = snap.theta(pi, pl);
    if (theta == 1.0) {
      // weights unchanged
    } else if (theta == 0.0) {
      weights = std::move(aux);
    } else {
      weights = (1.0 - theta) * aux + theta * weights;
    }
    map.penalty = std::move(pen);
  }
  map.weights = std::move(weights);
  return map;
}

}  // namespace tvspec
