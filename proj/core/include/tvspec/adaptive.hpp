#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "tvspec/config.hpp"
#include "tvspec/grid.hpp"
#include "tvspec/kernels.hpp"
#include "tvspec/raw.hpp"
#include "tvspec/types.hpp"

namespace tvspec {

/// Per-point state of the iteration on the estimation grid.
///
/// f_hat is kept in normalized units (physical value / RawPlane::scale) so
/// that every penalty statistic, theta and N_hat is independent of the
/// overall scale of the input series.
struct AdaptiveState {
  Matrix f_hat;
  Matrix n_hat;
  Matrix b_eff;
  Matrix theta;
  FlagMatrix neg_flag;
  Matrix search_bt;  ///< search bandwidths used to produce this state
  Matrix search_bf;
  Matrix n_aux;      ///< auxiliary weight sums of the producing iteration (N_in initially)
};

/// Effective bandwidth of a point whose effective weight sum n_hat was built
/// from a search window (bt, bf) with unpenalized weight sum `mass`:
///   sqrt(bt * bf / (2 pi)) * sqrt(n_hat / mass).
/// For an unpenalized interior kernel this equals sqrt(n_hat) / (2T), the
/// geometric mean of b_t and b_f / (2 pi); dividing by the local mass instead
/// of the interior constant keeps windows at the edges of the plane from
/// shrinking merely because they are clipped.
double effective_bandwidth(double n_hat, double mass, double bt, double bf);

/// Local mean of |f| plus the RMS deviation of f from that mean, over the
/// estimation points with |u_i - u| <= box_t and |lambda_l - lambda| <= box_f.
/// Returns 1e-12 when every value in the box is exactly zero.
double denominator_bar_f(const Matrix& f, const EstimationGrid& grid, std::size_t i, std::size_t l,
                         double box_t, double box_f);
Matrix denominator_plane(const Matrix& f, const EstimationGrid& grid, double box_t, double box_f);

/// Normalising factor of the penalty statistic at p1:
/// scale * N / (2 pi kappa_t kappa_f T bar_f^2).
double penalty_coefficient(double n, double bar_f, std::size_t T, const KernelConstants& consts,
                           double penalty_scale);

/// scale * N/(2 pi kappa_t kappa_f T) * ((f1 - f2) / bar_f)^2.
double penalty_statistic(double n_aux, double f1, double f2, double bar_f, std::size_t T,
                         const KernelConstants& consts, double penalty_scale);

/// Output of one penalty step (all matrices on the estimation grid).
struct AuxiliaryPlane {
  Matrix f_aux;      ///< normalized units
  Matrix n_aux;
  Matrix search_bt;
  Matrix search_bf;
  Matrix pen_coef;   ///< penalty coefficient at each point
  FlagMatrix separated;  ///< 1 where every weight vanished and the previous state was carried over
};

/// Denominator box bandwidths at iteration k (penalty or memory step).
struct BoxBandwidths {
  double pen_t, pen_f, mem_t, mem_f;
};

/// Penalty step k: adaptive weights K_t K_f K_st(P) over each point's search
/// window, penalties looked up at the nearest estimation point of each raw point.
AuxiliaryPlane penalty_step(const AdaptiveState& prev, const RawPlane& raw, const EstimationGrid& grid,
                            const EstimatorConfig& config, int k, const BoxBandwidths& boxes);

/// scale * N/(2 pi kappa_t kappa_f T) * ((f_aux - f_prev) / bar_f)^2.
double memory_statistic(double n_candidate, double f_aux, double f_prev, double bar_f, std::size_t T,
                        const KernelConstants& consts, double penalty_scale);

/// theta = 1 - (1 - eta) K_mem(P_mem); forced to 1 when the auxiliary value
/// is negative and below the previous one.
AdaptiveState memory_step(const AuxiliaryPlane& aux, const AdaptiveState& prev, const EstimationGrid& grid,
                          const EstimatorConfig& config, int k, const BoxBandwidths& boxes);

enum class StopReason { none, growth_stall, bias_dispersion, hard_cap };
std::string_view to_string(StopReason r);

struct IterationDiagnostics {
  int k = 0;
  double mean_growth = 0.0;
  double growth_q25 = 0.0;
  double growth_q75 = 0.0;
  double b_eff_min = 0.0;
  double b_eff_q25 = 0.0;
  double b_eff_q75 = 0.0;
  std::size_t count_negative = 0;     ///< points with f_hat < 0
  std::size_t count_full_memory = 0;  ///< points with theta == 1
  std::size_t count_separated = 0;    ///< points whose auxiliary window had zero weight
  StopReason stop_reason = StopReason::none;
  double seconds = 0.0;
};

/// Fills the growth / bandwidth statistics of diag and decides whether to stop.
StopReason stopping_check(IterationDiagnostics& diag, const AdaptiveState& state, const AdaptiveState& prev,
                          const EstimatorConfig& config, std::size_t T);

/// Everything needed to replay the weights of one iteration.
struct IterationSnapshot {
  int k = -1;  ///< -1 for the initial nonadaptive estimate
  Matrix f_hat;  ///< physical units
  Matrix n_hat;
  Matrix n_aux;
  Matrix theta;
  Matrix search_bt;
  Matrix search_bf;
  Matrix pen_coef;  ///< empty for the initial snapshot
  FlagMatrix neg_flag;
};

struct RunResult {
  Plane final;
  EstimatorConfig config;  ///< resolved configuration
  RawGrid raw_grid;
  double raw_scale = 1.0;
  std::vector<IterationSnapshot> history;  ///< initial + k = 0..k_max (when kept)
  std::vector<IterationDiagnostics> diagnostics;
  Matrix final_theta;
  Matrix final_n_hat;
  Matrix final_search_bt;
  Matrix final_search_bf;
};

/// Full procedure: nonadaptive initialisation with (b_t0, b_f0), then penalty
/// and memory steps until the stopping rule fires.
RunResult run_adaptive(const RawPlane& raw, const EstimatorConfig& config);

/// Weights of the final kernel at an estimation point, folded onto the raw
/// grid ((2T-1) x (T+1)), plus the penalty factors of the last iteration
/// (zero outside its search window).
struct KernelMap {
  std::size_t i = 0;
  std::size_t l = 0;
  double u = 0.0;
  double lambda = 0.0;
  Matrix weights;
  Matrix penalty;
};

/// Replays W = (1 - theta) W_aux + theta W_prev for the estimation point
/// nearest to (u, lambda). Throws UnavailableError without stored history.
KernelMap reconstruct_kernel(const RunResult& result, double u, double lambda);

}  // namespace tvspec
