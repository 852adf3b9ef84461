#pragma once

#include <string>

#include "tvspec/grid.hpp"

namespace tvspec::cli {

/// Rasterises a plane into a binary PPM (P6): one pixel per estimation point,
/// time increasing to the right and frequency increasing upwards. Values are
/// mapped linearly from [min, max] onto a fixed five-stop ramp
/// (#000004, #51127c, #b73779, #fc8961, #fcfdbf). A sidecar <out>.json
/// records min, max, the ramp and the axis orientation.
void render_plane(const Plane& plane, const std::string& out_path);

}  // namespace tvspec::cli
