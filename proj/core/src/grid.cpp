#include "tvspec/grid.hpp"

#include <algorithm>
#include <cmath>


namespace tvspec {
namespace {

bool inside_unit_support(double x) { return x * x <= 0.25; }

}  // namespace

IndexRange time_support(const RawGrid& grid, double u, double bt) {
  const long last = static_cast<long>(grid.n_time()) - 1;
  const double twoT = 2.0 * static_cast<double>(grid.T);
  auto inside = [&](long s) {
    return inside_unit_support((u - grid.u(static_cast<std::size_t>(s))) / bt);
  };
  IndexRange r;
  r.lo = std::clamp(static_cast<long>(std::ceil((u - 0.5 * bt) * twoT - 2.0)), 0L, last);
  r.hi = std::clamp(static_cast<long>(std::floor((u + 0.5 * bt) * twoT - 2.0)), 0L, last);
  // The closed-form bounds can be off by one ulp-sized step; settle them on the
  // same predicate the kernel evaluation uses.
  while (r.lo > 0 && inside(r.lo - 1)) --r.lo;
  while (r.lo <= r.hi && !inside(r.lo)) ++r.lo;
  while (r.hi < last && inside(r.hi + 1)) ++r.hi;
  while (r.hi >= r.lo && !inside(r.hi)) --r.hi;
  return r;
}

IndexRange freq_support(const RawGrid& grid, double lambda, double bf) {
  const long T = static_cast<long>(grid.T);
  const double scale = static_cast<double>(grid.T) / kPi;
  auto inside = [&](long j) { return inside_unit_support((lambda - grid.lambda(j)) / bf); };
  IndexRange r;
  r.lo = std::clamp(static_cast<long>(std::ceil((lambda - 0.5 * bf) * scale)), -T, 2 * T);
  r.hi = std::clamp(static_cast<long>(std::floor((lambda + 0.5 * bf) * scale)), -T, 2 * T);
  while (r.lo > -T && inside(r.lo - 1)) --r.lo;
  while (r.lo <= r.hi && !inside(r.lo)) ++r.lo;
  while (r.hi < 2 * T && inside(r.hi + 1)) ++r.hi;
  while (r.hi >= r.lo && !inside(r.hi)) --r.hi;
  return r;
}

EstimationGrid EstimationGrid::automatic(const RawGrid& raw) {
  EstimationGrid g;
  g.raw = raw;
  g.d_t = std::max<std::size_t>(1, (2 * raw.T) / 128);
  g.d_f = std::max<std::size_t>(1, raw.T / 128);
  return g;
}

std::size_t EstimationGrid::nearest_time(std::size_t s) const {
  return std::min(n_time() - 1, (s + d_t / 2) / d_t);
}

std::size_t EstimationGrid::nearest_freq(std::size_t j) const {
  return std::min(n_freq() - 1, (j + d_f / 2) / d_f);
}

}  // namespace tvspec
