#pragma once

// Render-only geometry export. Coordinates leave the exact world here and
// become doubles.

#include <span>
#include <string>
#include <vector>

#include "polyform/errors.hpp"
#include "polyform/tiling.hpp"

namespace polyform {

class MissingRenderData : public Error {
 public:
  MissingRenderData() : Error("tiling has no render data") {}
};

/// Outline of one cell in Cartesian coordinates.
struct CellMesh {
  std::size_t orbit = 0;
  std::vector<std::vector<double>> vertices;
  std::vector<std::vector<std::size_t>> faces;  // empty for 2D polygons
};

bool has_render_data(const TilingSpec& spec);

/// Throws MissingRenderData, or NotACell for a point off the tiling.
CellMesh cell_mesh(const TilingSpec& spec, const Point& cell);

/// One SVG; several forms are laid out as a grid gallery.
std::string export_svg(const TilingSpec& spec, std::span<const std::vector<Point>> forms);
/// One OFF mesh with a separate polyhedron per cell (no vertex sharing).
std::string export_off(const TilingSpec& spec, std::span<const Point> form);

}  // namespace polyform
