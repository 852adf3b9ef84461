#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tvspec/adaptive.hpp"
#include "tvspec/grid.hpp"
#include "tvspec/raw.hpp"
#include "tvspec/types.hpp"

namespace tvspec::io {

/// Binary container layout (all integers and floats little-endian):
///
///   bytes 0..7   magic "TVSPEC01"
///   u32          container version (kContainerVersion)
///   u32          kind (ContainerKind)
///   u64          T
///   u64          rows, cols        dimensions of every plane
///   u64          d_t, d_f          estimation-grid decimation (1 for raw planes)
///   u64          n_planes
///   f64          scale             physical value = scale * stored value
///   f64[...]     n_planes row-major planes of rows * cols values
enum class ContainerKind : std::uint32_t { raw_plane = 1, estimate_plane = 2, history = 3 };

struct Container {
  ContainerKind kind = ContainerKind::raw_plane;
  std::uint64_t T = 0;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t d_t = 1;
  std::uint64_t d_f = 1;
  double scale = 1.0;
  std::vector<Matrix> planes;
};

void write_container(std::ostream& out, const Container& c);
Container read_container(std::istream& in);
void write_container(const std::string& path, const Container& c);
Container read_container(const std::string& path);

void write_raw(const std::string& path, const RawPlane& raw);
RawPlane read_raw(const std::string& path);

/// History container: per snapshot the planes f_hat, n_hat, n_aux, theta,
/// search_bt, search_bf, pen_coef, neg_flag (in this order). scale holds the
/// raw-plane scale.
constexpr std::size_t kPlanesPerSnapshot = 8;
void write_history(const std::string& path, const RunResult& result);
/// Restores grid, scale and history into result (other fields untouched).
void read_history(const std::string& path, RunResult& result);

/// Decimal text with 17 significant digits (round-trips every double).
std::string format_double(double v);

/// Series CSV: header "t,value", one row per sample. A single-column file
/// without header is also accepted on input.
void write_series_csv(const std::string& path, const std::vector<double>& values);
std::vector<double> read_series_csv(const std::string& path);

/// Plane CSV: header "u,lambda,f", long format, time-major.
void write_plane_csv(const std::string& path, const Plane& plane);
void write_plane_csv(std::ostream& out, const Plane& plane);
/// Infers T, d_t and d_f from the coordinates; throws DataError when the
/// rows do not form a complete estimation grid.
Plane read_plane_csv(const std::string& path);

/// Raw plane CSV: header "tau,j,value".
void write_raw_csv(const std::string& path, const RawPlane& raw);

/// Kernel map CSV: header "tau,j,weight,penalty", nonzero weights only.
void write_kernel_csv(const std::string& path, const KernelMap& map, const RawGrid& grid);

/// Whole file as bytes; throws DataError when unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tvspec::io
