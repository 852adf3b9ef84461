#pragma once

namespace tvspec {

/// Constants shared by the localisation, penalty and memory kernels.
struct KernelConstants {
  double kappa_t = 1.2;  ///< integral of K_t^2
  double kappa_f = 1.2;  ///< integral of K_f^2
  double c_pen = 0.0;    ///< penalty cutoff, default 2 chi2_{1,0.9}
  double c_mem = 0.0;    ///< memory cutoff, default 2 chi2_{1,0.75}
  double rho = 1.02;     ///< per-iteration drift of the cutoffs
};

/// Defaults: c_pen = 2 chi2_{1,0.9}, c_mem = 2 chi2_{1,0.75}, rho = 1.02.
KernelConstants default_kernel_constants();

/// K(x) = 6 (1/4 - x^2) on [-1/2, 1/2], zero elsewhere.
inline double kernel_quadratic(double x) {
  const double x2 = x * x;
  return x2 <= 0.25 ? 6.0 * (0.25 - x2) : 0.0;
}

/// Concave penalty kernel [1 - (x / (c_pen rho^k))^2] on [0, c_pen rho^k].
double kernel_penalty(double x, int k, const KernelConstants& consts);

/// Linear memory kernel 1 - x / (c_mem rho^-k) on [0, c_mem rho^-k].
double kernel_memory(double x, int k, const KernelConstants& consts);

/// Standard normal quantile (Wichura, AS241 PPND16; relative accuracy about
/// 1e-16 over (0, 1)).
double normal_quantile(double p);

/// p-quantile of chi-square with one degree of freedom, computed as the
/// square of the normal quantile at (1 + p) / 2.
double chi2_quantile_1df(double p);

}  // namespace tvspec
