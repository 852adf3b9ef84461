#include "tvspec/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "tvspec/error.hpp"
#include "tvspec/version.hpp"

namespace tvspec::io {
namespace {

constexpr char kMagic[8] = {'T', 'V', 'S', 'P', 'E', 'C', '0', '1'};

template <class U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U out{};
    auto* src = reinterpret_cast<const unsigned char*>(&v);
    auto* dst = reinterpret_cast<unsigned char*>(&out);
    for (std::size_t i = 0; i < sizeof(U); ++i) dst[i] = src[sizeof(U) - 1 - i];
    return out;
  } else {
    return v;
  }
}

template <class U>
void put(std::ostream& out, U v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(U));
}

void put_double(std::ostream& out, double d) { put(out, std::bit_cast<std::uint64_t>(d)); }

template <class U>
U get(std::istream& in) {
  U v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(U));
  if (!in) throw DataError("truncated container");
  return to_little(v);
}

double get_double(std::istream& in) { return std::bit_cast<double>(get<std::uint64_t>(in)); }

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string_view::npos) lines.pop_back();
  return lines;
}

std::string_view trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_number(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

double require_number(std::string_view s, const std::string& where) {
  double v = 0.0;
  if (!parse_number(s, v)) throw DataError(where + ": not a number: '" + std::string(s) + "'");
  if (!std::isfinite(v)) throw DataError(where + ": non-finite value");
  return v;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

void check_written(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  auto out = open_out(path, true);
  out << content;
  check_written(out, path);
}

void write_container(std::ostream& out, const Container& c) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kContainerVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.kind));
  put<std::uint64_t>(out, c.T);
  put<std::uint64_t>(out, c.rows);
  put<std::uint64_t>(out, c.cols);
  put<std::uint64_t>(out, c.d_t);
  put<std::uint64_t>(out, c.d_f);
  put<std::uint64_t>(out, c.planes.size());
  put_double(out, c.scale);
  for (const Matrix& m : c.planes) {
    if (static_cast<std::uint64_t>(m.rows()) != c.rows || static_cast<std::uint64_t>(m.cols()) != c.cols)
      throw ParameterError("container plane has the wrong shape");
    for (Eigen::Index i = 0; i < m.size(); ++i) put_double(out, m.data()[i]);
  }
}

Container read_container(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw DataError("not a TVSPEC01 container");
  const auto version = get<std::uint32_t>(in);
  if (version != kContainerVersion)
    throw DataError("unsupported container version " + std::to_string(version));
  Container c;
  const auto kind = get<std::uint32_t>(in);
  if (kind < 1 || kind > 3) throw DataError("unknown container kind " + std::to_string(kind));
  c.kind = static_cast<ContainerKind>(kind);
  c.T = get<std::uint64_t>(in);
  c.rows = get<std::uint64_t>(in);
  c.cols = get<std::uint64_t>(in);
  c.d_t = get<std::uint64_t>(in);
  c.d_f = get<std::uint64_t>(in);
  const auto n_planes = get<std::uint64_t>(in);
  c.scale = get_double(in);
  if (c.rows == 0 || c.cols == 0 || c.rows > (1u << 24) || c.cols > (1u << 24) || n_planes > (1u << 20))
    throw DataError("implausible container dimensions");
  c.planes.reserve(n_planes);
  for (std::uint64_t p = 0; p < n_planes; ++p) {
    Matrix m(static_cast<Eigen::Index>(c.rows), static_cast<Eigen::Index>(c.cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = get_double(in);
    c.planes.push_back(std::move(m));
  }
  return c;
}

void write_container(const std::string& path, const Container& c) {
  auto out = open_out(path, true);
  write_container(out, c);
  check_written(out, path);
}

Container read_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  return read_container(in);
}

void write_raw(const std::string& path, const RawPlane& raw) {
  Container c;
  c.kind = ContainerKind::raw_plane;
  c.T = raw.grid.T;
  c.rows = raw.grid.n_time();
  c.cols = raw.grid.n_freq();
  c.scale = raw.scale;
  c.planes.push_back(raw.normalized);
  write_container(path, c);
}

RawPlane read_raw(const std::string& path) {
  Container c = read_container(path);
  if (c.kind != ContainerKind::raw_plane || c.planes.size() != 1)
    throw DataError("'" + path + "' is not a raw-plane container");
  RawPlane raw;
  raw.grid.T = c.T;
  if (c.T < 2 || c.rows != raw.grid.n_time() || c.cols != raw.grid.n_freq())
    throw DataError("raw container dimensions do not match T");
  raw.scale = c.scale;
  raw.normalized = std::move(c.planes.front());
  return raw;
}

void write_history(const std::string& path, const RunResult& result) {
  if (result.history.empty()) throw UnavailableError("run result carries no iteration history");
  const EstimationGrid& g = result.final.grid;
  Container c;
  c.kind = ContainerKind::history;
  c.T = g.raw.T;
  c.rows = g.n_time();
  c.cols = g.n_freq();
  c.d_t = g.d_t;
  c.d_f = g.d_f;
  c.scale = result.raw_scale;
  for (const IterationSnapshot& s : result.history) {
    c.planes.push_back(s.f_hat);
    c.planes.push_back(s.n_hat);
    c.planes.push_back(s.n_aux);
    c.planes.push_back(s.theta);
    c.planes.push_back(s.search_bt);
    c.planes.push_back(s.search_bf);
    c.planes.push_back(s.pen_coef.size() ? s.pen_coef
                                         : Matrix::Zero(static_cast<Eigen::Index>(c.rows),
                                                        static_cast<Eigen::Index>(c.cols)));
    c.planes.push_back(s.neg_flag.cast<double>());
  }
  write_container(path, c);
}

void read_history(const std::string& path, RunResult& result) {
  Container c = read_container(path);
  if (c.kind != ContainerKind::history || c.planes.empty() || c.planes.size() % kPlanesPerSnapshot != 0)
    throw DataError("'" + path + "' is not a history container");
  EstimationGrid g;
  g.raw.T = c.T;
  g.d_t = c.d_t;
  g.d_f = c.d_f;
  if (c.d_t == 0 || c.d_f == 0 || c.rows != g.n_time() || c.cols != g.n_freq())
    throw DataError("history container dimensions do not match its grid");
  result.raw_grid = g.raw;
  result.raw_scale = c.scale;
  result.final.grid = g;
  result.history.clear();
  for (std::size_t s = 0; s < c.planes.size() / kPlanesPerSnapshot; ++s) {
    IterationSnapshot snap;
    snap.k = static_cast<int>(s) - 1;
    auto* p = &c.planes[s * kPlanesPerSnapshot];
    snap.f_hat = std::move(p[0]);
    snap.n_hat = std::move(p[1]);
    snap.n_aux = std::move(p[2]);
    snap.theta = std::move(p[3]);
    snap.search_bt = std::move(p[4]);
    snap.search_bf = std::move(p[5]);
    if (s > 0) snap.pen_coef = std::move(p[6]);
    snap.neg_flag = p[7].cast<std::uint8_t>();
    result.history.push_back(std::move(snap));
  }
  result.final.values = result.history.back().f_hat;
  result.final_theta = result.history.back().theta;
  result.final_n_hat = result.history.back().n_hat;
  result.final_search_bt = result.history.back().search_bt;
  result.final_search_bf = result.history.back().search_bf;
}

void write_series_csv(const std::string& path, const std::vector<double>& values) {
  auto out = open_out(path);
  out << "t,value\n";
  for (std::size_t t = 0; t < values.size(); ++t) out << (t + 1) << ',' << format_double(values[t]) << '\n';
  check_written(out, path);
}

std::vector<double> read_series_csv(const std::string& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  std::vector<double> values;
  std::size_t first = 0;
  int column = -1;
  if (!lines.empty()) {
    const auto header = split_fields(lines[0]);
    double probe = 0.0;
    if (!parse_number(header.back(), probe)) {
      first = 1;
      for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == "value") column = static_cast<int>(c);
      if (column < 0) column = static_cast<int>(header.size()) - 1;
    }
  }
  for (std::size_t n = first; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    const auto fields = split_fields(lines[n]);
    const std::size_t c = column < 0 ? fields.size() - 1 : static_cast<std::size_t>(column);
    if (c >= fields.size()) throw DataError(path + ":" + std::to_string(n + 1) + ": missing column");
    values.push_back(require_number(fields[c], path + ":" + std::to_string(n + 1)));
  }
  if (values.empty()) throw DataError("'" + path + "' contains no samples");
  return values;
}

void write_plane_csv(std::ostream& out, const Plane& plane) {
  const EstimationGrid& g = plane.grid;
  out << "u,lambda,f\n";
  for (std::size_t i = 0; i < g.n_time(); ++i)
    for (std::size_t l = 0; l < g.n_freq(); ++l)
      out << format_double(g.u(i)) << ',' << format_double(g.lambda(l)) << ','
          << format_double(plane.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l))) << '\n';
}

void write_plane_csv(const std::string& path, const Plane& plane) {
  auto out = open_out(path);
  write_plane_csv(out, plane);
  check_written(out, path);
}

Plane read_plane_csv(const std::string& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw DataError("'" + path + "' contains no plane rows");
  const auto header = split_fields(lines[0]);
  if (header.size() != 3 || header[0] != "u" || header[1] != "lambda" || header[2] != "f")
    throw DataError("'" + path + "': expected header u,lambda,f");
  std::vector<double> us, ls, fs;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto fields = split_fields(lines[n]);
    const std::string where = path + ":" + std::to_string(n + 1);
    if (fields.size() != 3) throw DataError(where + ": expected 3 columns");
    us.push_back(require_number(fields[0], where));
    ls.push_back(require_number(fields[1], where));
    fs.push_back(require_number(fields[2], where));
  }
  // Number of frequencies = length of the first run of equal u.
  std::size_t nf = 1;
  while (nf < us.size() && us[nf] == us[0]) ++nf;
  if (us.size() % nf != 0 || nf < 2) throw DataError("'" + path + "': rows do not form a grid");
  const std::size_t nt = us.size() / nf;
  if (nt < 2) throw DataError("'" + path + "': need at least two time points");
  Plane p;
  const double T = std::round(1.0 / us[0]);
  if (!(T >= 2.0)) throw DataError("'" + path + "': cannot infer T");
  p.grid.raw.T = static_cast<std::size_t>(T);
  p.grid.d_t = static_cast<std::size_t>(std::llround((us[nf] - us[0]) * 2.0 * T));
  p.grid.d_f = static_cast<std::size_t>(std::llround(ls[1] * T / kPi));
  if (p.grid.d_t == 0 || p.grid.d_f == 0 || p.grid.n_time() != nt || p.grid.n_freq() != nf)
    throw DataError("'" + path + "': coordinates do not match any estimation grid");
  p.values.resize(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nf));
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t l = 0; l < nf; ++l) {
      const std::size_t r = i * nf + l;
      if (std::abs(us[r] - p.grid.u(i)) > 1e-9 || std::abs(ls[r] - p.grid.lambda(l)) > 1e-9)
        throw DataError(path + ":" + std::to_string(r + 2) + ": coordinate off the inferred grid");
      p.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = fs[r];
    }
  }
  p.provenance = path;
  return p;
}

void write_raw_csv(const std::string& path, const RawPlane& raw) {
  auto out = open_out(path);
  out << "tau,j,value\n";
  for (std::size_t s = 0; s < raw.grid.n_time(); ++s)
    for (std::size_t j = 0; j < raw.grid.n_freq(); ++j)
      out << format_double(raw.grid.tau(s)) << ',' << j << ',' << format_double(raw.value(s, j)) << '\n';
  check_written(out, path);
}

void write_kernel_csv(const std::string& path, const KernelMap& map, const RawGrid& grid) {
  auto out = open_out(path);
  out << "tau,j,weight,penalty\n";
  for (Eigen::Index s = 0; s < map.weights.rows(); ++s)
    for (Eigen::Index j = 0; j < map.weights.cols(); ++j)
      if (map.weights(s, j) != 0.0)
        out << format_double(grid.tau(static_cast<std::size_t>(s))) << ',' << j << ','
            << format_double(map.weights(s, j)) << ',' << format_double(map.penalty(s, j)) << '\n';
  check_written(out, path);
}

}  // namespace tvspec::io
