#include "tvspec/raw.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <string>

#include "tvspec/error.hpp"
#include "tvspec/parallel.hpp"

namespace tvspec {
namespace {

void require_finite(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]))
      throw DataError("non-finite sample at t = " + std::to_string(i + 1));
  }
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t n) {
  return RealBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuffer alloc_complex(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

/// Real-to-complex transform of length 2T whose bins j = 0..T sit exactly on
/// lambda_j = pi j / T. The plan is created once (planner calls are not
/// thread-safe) and executed on per-worker buffers.
class LagTransform {
public:
  explicit LagTransform(std::size_t T) : length_(2 * T) {
    auto in = alloc_real(length_);
    auto out = alloc_complex(length_ / 2 + 1);
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(length_), in.get(), out.get(), FFTW_ESTIMATE);
  }
  ~LagTransform() { fftw_destroy_plan(plan_); }
  LagTransform(const LagTransform&) = delete;
  LagTransform& operator=(const LagTransform&) = delete;

  std::size_t length() const { return length_; }
  void execute(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(plan_, in, out); }

private:
  std::size_t length_;
  fftw_plan plan_;
};

/// Evaluates (1/2pi) sum_k c(|k|) e^{-ik lambda_j} for every row produced by
/// fill(row, lags) where lags has room for lags 0..T-1.
template <class FillLags>
Matrix transform_rows(std::size_t T, std::size_t n_rows, FillLags fill) {
  LagTransform fft(T);
  const std::size_t M = fft.length();
  Matrix out(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(T + 1));
  std::vector<double> worst_ratio(n_rows, 0.0);

  parallel_for(n_rows, [&](std::size_t begin, std::size_t end) {
    auto in = alloc_real(M);
    auto spectrum = alloc_complex(M / 2 + 1);
    std::vector<double> lags(T);
    for (std::size_t row = begin; row < end; ++row) {
      fill(row, lags);
      std::fill(in.get(), in.get() + M, 0.0);
      in[0] = lags[0];
      for (std::size_t k = 1; k < T; ++k) {
        in[k] = lags[k];
        in[M - k] = lags[k];
      }
      fft.execute(in.get(), spectrum.get());
      double max_re = 0.0;
      double max_im = 0.0;
      for (std::size_t j = 0; j <= T; ++j) {
        max_re = std::max(max_re, std::abs(spectrum[j][0]));
        max_im = std::max(max_im, std::abs(spectrum[j][1]));
        out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) = spectrum[j][0] / kTwoPi;
      }
      worst_ratio[row] = max_re > 0.0 ? max_im / max_re : max_im;
    }
  });

  for (double r : worst_ratio) {
    if (r > 1e-9) throw Error("internal error: pre-periodogram transform is not real");
  }
  return out;
}

/// C*(n/2, lag) for n = 2 tau; indices outside [1, T] contribute 0.
double cov_star_twice_tau(std::span<const double> x, long n, long lag) {
  const long Tl = static_cast<long>(x.size());
  auto in_range = [Tl](long i) { return i >= 1 && i <= Tl; };
  auto X = [&x](long i) { return x[static_cast<std::size_t>(i - 1)]; };

  if ((n - lag) % 2 == 0) {
    const long lo = (n - lag) / 2;
    const long hi = (n + lag) / 2;
    return in_range(lo) && in_range(hi) ? X(lo) * X(hi) : 0.0;
  }
  // Average of the two lag-k products whose midpoints straddle tau.
  const long a_lo = (n - lag - 1) / 2;
  const long a_hi = (n + lag - 1) / 2;
  const long b_lo = (n - lag + 1) / 2;
  const long b_hi = (n + lag + 1) / 2;
  if (!(in_range(a_lo) && in_range(a_hi) && in_range(b_lo) && in_range(b_hi))) return 0.0;
  return 0.5 * (X(a_lo) * X(a_hi) + X(b_lo) * X(b_hi));
}

}  // namespace

std::size_t RawGrid::time_index(double tau) const {
  const double twice = 2.0 * tau;
  const double rounded = std::round(twice);
  if (std::abs(twice - rounded) > 1e-9 || rounded < 2.0 || rounded > 2.0 * static_cast<double>(T))
    throw ParameterError("time point " + std::to_string(tau) + " is not on the half-integer grid");
  return static_cast<std::size_t>(rounded) - 2;
}

std::size_t RawGrid::fold(long j) const {
  const long period = 2 * static_cast<long>(T);
  long m = j % period;
  if (m < 0) m += period;
  return static_cast<std::size_t>(m <= static_cast<long>(T) ? m : period - m);
}

double cov_star(std::span<const double> x, double tau, std::size_t k) {
  const RawGrid grid{x.size()};
  const long n = static_cast<long>(grid.time_index(tau)) + 2;
  return cov_star_twice_tau(x, n, static_cast<long>(k));
}

RawPlane preperiodogram_modified(std::span<const double> x) {
  const std::size_t T = x.size();
  if (T < 8) throw ParameterError("pre-periodogram needs at least 8 samples");
  require_finite(x);

  RawPlane plane;
  plane.grid = RawGrid{T};
  const double m = max_abs(x);
  if (m == 0.0) {
    plane.normalized = Matrix::Zero(static_cast<Eigen::Index>(2 * T - 1), static_cast<Eigen::Index>(T + 1));
    plane.scale = 1.0;
    return plane;
  }
  std::vector<double> y(x.begin(), x.end());
  for (double& v : y) v /= m;
  plane.scale = m * m;

  const RawGrid& grid = plane.grid;
  plane.normalized = transform_rows(T, grid.n_time(), [&](std::size_t s, std::vector<double>& lags) {
    const long n = static_cast<long>(s) + 2;
    for (std::size_t k = 0; k < T; ++k) lags[k] = cov_star_twice_tau(y, n, static_cast<long>(k));
  });
  return plane;
}

Matrix preperiodogram_classic(std::span<const double> x) {
  const std::size_t T = x.size();
  if (T < 8) throw ParameterError("pre-periodogram needs at least 8 samples");
  require_finite(x);
  const long Tl = static_cast<long>(T);

  return transform_rows(T, T, [&](std::size_t row, std::vector<double>& lags) {
    const long t = static_cast<long>(row) + 1;
    for (long k = 0; k < Tl; ++k) {
      // floor(t + (k+1)/2) and floor(t - (k-1)/2) for k >= 0
      const long a = t + (k + 1) / 2;
      const long b = t - k / 2;
      lags[static_cast<std::size_t>(k)] =
          (a >= 1 && a <= Tl && b >= 1 && b <= Tl)
              ? x[static_cast<std::size_t>(a - 1)] * x[static_cast<std::size_t>(b - 1)]
              : 0.0;
    }
  });
}

std::vector<double> periodogram(std::span<const double> x) {
  const std::size_t T = x.size();
  if (T < 2) throw ParameterError("periodogram needs at least 2 samples");
  require_finite(x);
  const std::size_t M = 2 * T;
  auto in = alloc_real(M);
  auto out = alloc_complex(M / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(M), in.get(), out.get(), FFTW_ESTIMATE);
  std::fill(in.get(), in.get() + M, 0.0);
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  std::vector<double> result(T + 1);
  const double norm = kTwoPi * static_cast<double>(T);
  for (std::size_t j = 0; j <= T; ++j)
    result[j] = (out[j][0] * out[j][0] + out[j][1] * out[j][1]) / norm;
  return result;
}

}  // namespace tvspec
