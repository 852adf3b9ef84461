#pragma once

#include "tvspec/grid.hpp"
#include "tvspec/raw.hpp"
#include "tvspec/types.hpp"

namespace tvspec {

/// Nonadaptive kernel estimate
///   f(u, l) = sum K_f((l - l_j)/b_f) K_t((u - s/T)/b_t) J(s/T, l_j) / C
/// over all raw points, C the sum of the kernel products. Time windows are
/// clipped at the ends of the series; frequencies use the even, 2 pi-periodic
/// extension of J. b_t is in rescaled time, b_f in radians.
///
/// Evaluated with two separable passes (time, then frequency).
Plane smooth_nonadaptive(const RawPlane& raw, double bt, double bf, const EstimationGrid& grid);

/// Same estimator with per-point bandwidths (n_time x n_freq matrices over
/// the estimation grid).
Plane smooth_nonadaptive(const RawPlane& raw, const Matrix& bt, const Matrix& bf,
                         const EstimationGrid& grid);

/// Sum of the unnormalised kernel products at (u, lambda); no 1/b factors.
double weight_sum(double bt, double bf, double u, double lambda, const RawGrid& grid);

/// weight_sum for every point of the estimation grid.
Matrix weight_sum_plane(double bt, double bf, const EstimationGrid& grid);

}  // namespace tvspec
