#include "tvspec/sim.hpp"

#include <cmath>
#include <cstdlib>

#include "tvspec/error.hpp"
#include "tvspec/types.hpp"

namespace tvspec::sim {
namespace {

struct Ma1Coefficients {
  double a;  // weight on Z_t
  double b;  // weight on Z_{t-1} (entered with a minus sign)
};

Ma1Coefficients tvma2_coefficients(double v) {
  return {std::cos(kTwoPi * v), v * v};
}

bool before_break(const ModelSpec& spec, double u) { return u <= spec.break_u(); }

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::white_noise_break: return "white_noise_break";
    case ModelKind::tvma2: return "tvma2";
    case ModelKind::break_tvma2: return "break_tvma2";
    case ModelKind::custom_csv: return "custom_csv";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "white_noise_break" || name == "wn-break") return ModelKind::white_noise_break;
  if (name == "tvma2") return ModelKind::tvma2;
  if (name == "break_tvma2" || name == "tvma2-break") return ModelKind::break_tvma2;
  if (name == "custom_csv" || name == "csv") return ModelKind::custom_csv;
  throw ParameterError("unknown model '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
  const bool has_break = kind == ModelKind::white_noise_break || kind == ModelKind::break_tvma2;
  if (has_break) {
    if (T == 0) throw ParameterError("break model requires the series length T");
    if (t0 < 1 || t0 > T) throw ParameterError("break index t0 must lie in [1, T]");
  }
  if (kind == ModelKind::white_noise_break && !(sigma1 > 0.0 && sigma2 > 0.0))
    throw ParameterError("standard deviations must be positive");
  if (kind == ModelKind::break_tvma2 && !(sigma > 0.0))
    throw ParameterError("standard deviation must be positive");
}

double ModelSpec::break_u() const {
  return T == 0 ? 1.0 : static_cast<double>(t0) / static_cast<double>(T);
}

ModelSpec white_noise(std::size_t T, double sigma) {
  return white_noise_break(T, T, sigma, sigma);
}

ModelSpec white_noise_break(std::size_t T, std::size_t t0, double sigma1, double sigma2) {
  ModelSpec s;
  s.kind = ModelKind::white_noise_break;
  s.T = T;
  s.t0 = t0;
  s.sigma1 = sigma1;
  s.sigma2 = sigma2;
  return s;
}

ModelSpec tvma2(std::size_t T) {
  ModelSpec s;
  s.kind = ModelKind::tvma2;
  s.T = T;
  return s;
}

ModelSpec break_tvma2(std::size_t T, std::size_t t0, double sigma) {
  ModelSpec s;
  s.kind = ModelKind::break_tvma2;
  s.T = T;
  s.t0 = t0;
  s.sigma = sigma;
  return s;
}

double GaussianSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  constexpr double kScale = 0x1.0p-53;
  const double u1 = static_cast<double>(engine_() >> 11) * kScale;
  const double u2 = static_cast<double>(engine_() >> 11) * kScale;
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double phi = kTwoPi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

TimeSeries generate(const ModelSpec& spec, std::size_t T, std::uint64_t seed) {
  if (T == 0) throw ParameterError("series length must be positive");
  if (spec.kind == ModelKind::custom_csv)
    throw ParameterError("custom_csv series are read from file, not simulated");
  if (spec.T != 0 && spec.T != T)
    throw ParameterError("model was configured for a different series length");
  GaussianSource source(seed);
  std::vector<double> z(T + 1);
  for (auto& v : z) v = source.next();
  ModelSpec s = spec;
  s.T = T;
  TimeSeries out = generate_from_innovations(s, z);
  out.seed = seed;
  return out;
}

TimeSeries generate_from_innovations(const ModelSpec& spec, std::span<const double> z) {
  if (z.size() < 2) throw ParameterError("need at least Z_0 and Z_1");
  const std::size_t T = z.size() - 1;
  ModelSpec s = spec;
  if (s.T == 0) s.T = T;
  if (s.T != T) throw ParameterError("innovation count does not match T + 1");
  s.validate();

  TimeSeries out;
  out.model_tag = s.kind;
  out.values.resize(T);
  const double Td = static_cast<double>(T);
  for (std::size_t t = 1; t <= T; ++t) {
    const double u = static_cast<double>(t) / Td;
    double x = 0.0;
    switch (s.kind) {
      case ModelKind::white_noise_break:
        x = (t <= s.t0 ? s.sigma1 : s.sigma2) * z[t];
        break;
      case ModelKind::tvma2: {
        const auto c = tvma2_coefficients(u);
        x = c.a * z[t] - c.b * z[t - 1];
        break;
      }
      case ModelKind::break_tvma2:
        if (t <= s.t0) {
          x = s.sigma * z[t];
        } else {
          const auto c = tvma2_coefficients(u - s.shift);
          x = c.a * z[t] - c.b * z[t - 1];
        }
        break;
      case ModelKind::custom_csv:
        throw ParameterError("custom_csv series cannot be simulated");
    }
    out.values[t - 1] = x;
  }
  return out;
}

double true_spectrum(const ModelSpec& spec, double u, double lambda) {
  switch (spec.kind) {
    case ModelKind::white_noise_break: {
      const double sd = before_break(spec, u) ? spec.sigma1 : spec.sigma2;
      return sd * sd / kTwoPi;
    }
    case ModelKind::tvma2:
    case ModelKind::break_tvma2: {
      if (spec.kind == ModelKind::break_tvma2 && before_break(spec, u))
        return spec.sigma * spec.sigma / kTwoPi;
      const double v = spec.kind == ModelKind::tvma2 ? u : u - spec.shift;
      const auto c = tvma2_coefficients(v);
      return (c.a * c.a - 2.0 * c.a * c.b * std::cos(lambda) + c.b * c.b) / kTwoPi;
    }
    case ModelKind::custom_csv:
      break;
  }
  throw UnavailableError("no closed-form spectrum for custom_csv series");
}

double local_autocovariance(const ModelSpec& spec, double u, long k) {
  const long lag = std::labs(k);
  switch (spec.kind) {
    case ModelKind::white_noise_break: {
      const double sd = before_break(spec, u) ? spec.sigma1 : spec.sigma2;
      return lag == 0 ? sd * sd : 0.0;
    }
    case ModelKind::tvma2:
    case ModelKind::break_tvma2: {
      if (spec.kind == ModelKind::break_tvma2 && before_break(spec, u))
        return lag == 0 ? spec.sigma * spec.sigma : 0.0;
      const double v = spec.kind == ModelKind::tvma2 ? u : u - spec.shift;
      const auto c = tvma2_coefficients(v);
      if (lag == 0) return c.a * c.a + c.b * c.b;
      if (lag == 1) return -c.a * c.b;
      return 0.0;
    }
    case ModelKind::custom_csv:
      break;
  }
  throw UnavailableError("no local autocovariance for custom_csv series");
}

}  // namespace tvspec::sim
