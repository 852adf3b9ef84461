#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "tvspec/grid.hpp"
#include "tvspec/raw.hpp"
#include "tvspec/sim.hpp"
#include "tvspec/types.hpp"

namespace tvspec {

/// Summary of pointwise squared errors over a plane.
struct ErrorReport {
  double mse = 0.0;
  std::array<double, 5> se_quantiles{};  ///< Q0, Q25, Q50, Q75, Q100
  std::size_t n_points = 0;
  double median() const { return se_quantiles[2]; }
};

struct SquaredError {
  ErrorReport report;
  Matrix se;  ///< per-point squared error (NaN where excluded by the margin)
};

/// Points closer than margin_t (rescaled time) or margin_f (radians) to an
/// edge of the plane are excluded from the summary.
struct Margin {
  double t = 0.0;
  double f = 0.0;
  bool contains(double u, double lambda) const {
    return u >= t && u <= 1.0 - t && lambda >= f && lambda <= kPi - f;
  }
};

using TruthFunction = std::function<double(double u, double lambda)>;

/// Type-7 quantile of a nonempty sample.
double sample_quantile(std::vector<double> values, double p);

ErrorReport summarize_errors(std::vector<double> se);

SquaredError squared_error(const Plane& est, const TruthFunction& truth, const Margin& margin = {});
/// Truth given as a plane; throws GridMismatchError unless the grids agree.
SquaredError squared_error(const Plane& est, const Plane& truth, const Margin& margin = {});

/// Evaluates a model's closed-form density on an estimation grid.
Plane truth_plane(const sim::ModelSpec& spec, const EstimationGrid& grid);

/// Default oracle search grid: b_t and b_f / (2 pi) in {0.05 * 1.25^m},
/// m = 0..8, capped at the full plane.
std::vector<std::pair<double, double>> default_bandwidth_grid();

struct OracleResult {
  double bt = 0.0;
  double bf = 0.0;
  Plane plane;
  ErrorReport report;
};

/// Exhaustive MSE minimiser over candidate (b_t, b_f) pairs; ties go to the
/// larger b_t * b_f.
OracleResult optimal_global_bandwidth(const RawPlane& raw, const TruthFunction& truth,
                                      const EstimationGrid& grid,
                                      const std::vector<std::pair<double, double>>& candidates,
                                      const Margin& margin = {});

/// Mean over the frequency axis for each time point.
std::vector<double> freq_average(const Plane& est);
/// Rescaled times of the estimation grid rows.
std::vector<double> time_axis(const EstimationGrid& grid);

struct BreakEstimate {
  double u_hat = 0.0;
  std::size_t index = 0;     ///< first point right of the break
  double statistic = 0.0;    ///< |right mean - left mean| at the maximiser
  double noise = 0.0;        ///< robust noise SD of the curve
  bool low_confidence = false;
};

/// Sliding two-sided difference of means with half-window 5% of the curve
/// length (at least one point). The noise SD is estimated from the median
/// absolute first difference; the estimate is flagged low-confidence when
/// the statistic does not exceed three noise SDs.
BreakEstimate detect_break(const std::vector<double>& curve, const std::vector<double>& u);

/// (1/2 pi) sum_{|k| <= k_max} gamma(u, k) e^{-i k lambda}.
double wigner_ville_truncated(const sim::ModelSpec& spec, double u, double lambda, long k_max);

}  // namespace tvspec
