#pragma once

#include <string>

#include "shf/height.hpp"

namespace shf {

// Renders a d=2 height function as its lozenge tiling over the given
// window: one lozenge per tiling edge whose two triangles lie inside the
// window, with three fill classes by edge direction. Throws for d != 2.
std::string render_svg(const HeightField& f, const Region& window);

}  // namespace shf
