#pragma once

#include <string>

#include "ringmap/constructors.hpp"

namespace ringmap {

/// Images of parameter curves under the map: circles and rays for annuli, horizontal and
/// vertical lines otherwise. Each curve has at least `resolution` points; points that fail
/// to evaluate split the polyline and are counted in an SVG comment.
std::string render_grid_svg(const HarmonicMapSpec& spec, int resolution = 200, int curves = 12);

}  // namespace ringmap
