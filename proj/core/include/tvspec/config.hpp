#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tvspec/grid.hpp"
#include "tvspec/kernels.hpp"

namespace tvspec {

/// Tuning parameters of the adaptive estimator.
///
/// Zero-valued entries marked "auto" are filled in by resolved(): the
/// denominator bandwidths default to the initial bandwidths, the cutoffs to
/// 2 chi2_{1,p_pen} and 2 chi2_{1,p_mem}, and the decimation factors to
/// EstimationGrid::automatic.
struct EstimatorConfig {
  double b_t0 = 0.12;                        ///< initial time bandwidth (rescaled time)
  double b_f0 = 0.12 * 6.283185307179586;    ///< initial frequency bandwidth (radians)
  double gamma_t = 1.2;
  double gamma_f = 1.2;
  double rho = 1.02;
  double eta = 0.25;
  double q = 0.15;                           ///< percentile (fraction) driving box shrinkage
  double b_star_t0 = 0.0;                    ///< auto: b_t0
  double b_star_f0 = 0.0;                    ///< auto: b_f0
  double b_sstar_t0 = 0.0;                   ///< auto: b_t0
  double b_sstar_f0 = 0.0;                   ///< auto: b_f0
  double p_pen = 0.9;
  double p_mem = 0.75;
  double c_pen = 0.0;                        ///< auto: 2 chi2_{1,p_pen}
  double c_mem = 0.0;                        ///< auto: 2 chi2_{1,p_mem}
  double penalty_scale = 0.5;
  int k_hard = 25;
  double bias_exponent = -1.0 / 6.0;
  std::size_t d_t = 0;                       ///< auto
  std::size_t d_f = 0;                       ///< auto
  bool keep_history = true;

  /// Copy with every "auto" entry filled in for a series of length T.
  EstimatorConfig resolved(std::size_t T) const;
  /// Throws ParameterError for values outside their admissible domain.
  void validate() const;
  /// Human-readable notes for values outside the recommended ranges.
  std::vector<std::string> warnings(std::size_t T) const;

  KernelConstants kernel_constants() const;
  EstimationGrid estimation_grid(const RawGrid& raw) const;

  /// Flat "key = value" document; '#' starts a comment. Unknown keys,
  /// duplicates and malformed values raise ConfigError.
  static EstimatorConfig parse(std::string_view text);
  static EstimatorConfig load(const std::string& path);
  /// Serialises every key (17 significant digits) in the format read by parse.
  std::string to_text() const;

  static const std::vector<std::string>& keys();
};

}  // namespace tvspec
