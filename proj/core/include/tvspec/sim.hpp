#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tvspec::sim {

enum class ModelKind { white_noise_break, tvma2, break_tvma2, custom_csv };

std::string_view to_string(ModelKind kind);
/// Accepts the canonical names plus the short CLI aliases
/// (wn-break, tvma2, tvma2-break, csv).
ModelKind parse_model_kind(std::string_view name);

/// Parameters of one of the built-in example processes.
///
/// white_noise_break:  X_t = sigma1 Z_t for t <= t0, sigma2 Z_t afterwards.
/// tvma2:              X_t = cos(2 pi t/T) Z_t - (t/T)^2 Z_{t-1}.
/// break_tvma2:        X_t = sigma Z_t for t <= t0, otherwise the tvma2
///                     recursion evaluated at t/T - shift.
struct ModelSpec {
  ModelKind kind = ModelKind::tvma2;
  std::size_t T = 0;   ///< series length the break index refers to
  std::size_t t0 = 0;  ///< break index in samples (break models)
  double sigma1 = 1.0;
  double sigma2 = 3.1622776601683795;  // sqrt(10)
  double sigma = 1.0;
  double shift = 0.2;

  /// Throws ParameterError when the parameters are inconsistent.
  void validate() const;
  /// Rescaled break location t0 / T.
  double break_u() const;
};

ModelSpec white_noise(std::size_t T, double sigma = 1.0);
ModelSpec white_noise_break(std::size_t T, std::size_t t0, double sigma1 = 1.0,
                            double sigma2 = 3.1622776601683795);
ModelSpec tvma2(std::size_t T);
ModelSpec break_tvma2(std::size_t T, std::size_t t0, double sigma = 1.0);

struct TimeSeries {
  std::vector<double> values;
  ModelKind model_tag = ModelKind::custom_csv;
  std::uint64_t seed = 0;

  std::size_t size() const { return values.size(); }
  /// 1-based access X_t, t in [1, T].
  double at(std::size_t t) const { return values[t - 1]; }
};

/// Standard Gaussian innovations: std::mt19937_64 seeded with the given
/// value, 53-bit uniforms u = (x >> 11) * 2^-53, and the Box-Muller
/// transform z0 = r cos(2 pi u2), z1 = r sin(2 pi u2) with
/// r = sqrt(-2 ln(1 - u1)). Draws are consumed in pairs, z0 first.
class GaussianSource {
public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
  double next();

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Simulates the model with innovations Z_0, ..., Z_T drawn in order from
/// GaussianSource(seed). Z_0 is the burn-in innovation for the lagged term.
TimeSeries generate(const ModelSpec& spec, std::size_t T, std::uint64_t seed);

/// Same recursion with caller-supplied innovations (z.size() == T + 1,
/// z[0] = Z_0).
TimeSeries generate_from_innovations(const ModelSpec& spec, std::span<const double> z);

/// Closed-form time-varying spectral density f(u, lambda).
double true_spectrum(const ModelSpec& spec, double u, double lambda);

/// Local autocovariance gamma(u, k) = int f(u, l) e^{i l k} dl.
double local_autocovariance(const ModelSpec& spec, double u, long k);

}  // namespace tvspec::sim
