#include "render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tvspec/error.hpp"

namespace tvspec::cli {
namespace {

constexpr std::array<std::array<int, 3>, 5> kRamp{{
    {0x00, 0x00, 0x04}, {0x51, 0x12, 0x7c}, {0xb7, 0x37, 0x79}, {0xfc, 0x89, 0x61}, {0xfc, 0xfd, 0xbf}}};

std::array<unsigned char, 3> colour(double t) {
  t = std::clamp(t, 0.0, 1.0) * static_cast<double>(kRamp.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(t), kRamp.size() - 2);
  const double f = t - static_cast<double>(i);
  std::array<unsigned char, 3> c{};
  for (std::size_t k = 0; k < 3; ++k)
    c[k] = static_cast<unsigned char>(std::lround((1.0 - f) * kRamp[i][k] + f * kRamp[i + 1][k]));
  return c;
}

}  // namespace

void render_plane(const Plane& plane, const std::string& out_path) {
  const Matrix& v = plane.values;
  if (v.size() == 0) throw DataError("cannot render an empty plane");
  const double lo = v.minCoeff();
  const double hi = v.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  const auto width = v.rows();
  const auto height = v.cols();

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + out_path + "'");
  out << "P6\n" << width << ' ' << height << "\n255\n";
  for (Eigen::Index y = height - 1; y >= 0; --y) {
    for (Eigen::Index x = 0; x < width; ++x) {
      const auto c = colour((v(x, y) - lo) / span);
      out.write(reinterpret_cast<const char*>(c.data()), 3);
    }
  }
  if (!out) throw DataError("failed writing '" + out_path + "'");

  nlohmann::ordered_json side;
  side["image"] = out_path;
  side["width"] = width;
  side["height"] = height;
  side["min"] = lo;
  side["max"] = hi;
  side["scaling"] = "linear";
  side["ramp"] = {"#000004", "#51127c", "#b73779", "#fc8961", "#fcfdbf"};
  side["x_axis"] = "u (left to right)";
  side["y_axis"] = "lambda (bottom to top, 0 to pi)";
  std::ofstream meta(out_path + ".json");
  if (!meta) throw DataError("cannot write '" + out_path + ".json'");
  meta << side.dump(2) << '\n';
}

}  // namespace tvspec::cli
