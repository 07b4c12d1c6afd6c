#include "polyform/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace polyform {

namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
constexpr double kUnit = 24.0;  // SVG user units per Cartesian unit
constexpr double kMargin = 0.5;

std::string num(double v) {
  if (std::abs(v) < 5e-10) v = 0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  void add(double x, double y) {
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  }
};

}  // namespace

bool has_render_data(const TilingSpec& spec) {
  if (!spec.embedding) return false;
  return std::all_of(spec.orbits.begin(), spec.orbits.end(), [](const OrbitSpec& o) { return o.render.has_value(); });
}

CellMesh cell_mesh(const TilingSpec& spec, const Point& cell) {
  if (!has_render_data(spec)) throw MissingRenderData();
  auto classes = classify(spec, cell);
  if (classes.empty()) throw NotACell(cell.str());
  const VertexClass& vc = classes.front();
  const AffineMap& g = spec.orientations[vc.orientation];
  const RenderGeometry& geom = *spec.orbits[vc.orbit].render;

  CellMesh mesh;
  mesh.orbit = vc.orbit;
  for (const auto& v : geom.vertices) mesh.vertices.push_back(embed(spec, g.apply(v) + vc.shift));
  mesh.faces = geom.faces;
  // A reflection turns face loops inside out; flip them back.
  if (g.linear().determinant().sign() < 0)
    for (auto& f : mesh.faces) std::reverse(f.begin(), f.end());
  return mesh;
}

std::string export_svg(const TilingSpec& spec, std::span<const std::vector<Point>> forms) {
  if (spec.dim != 2) throw Error("SVG export needs a 2D tiling");
  if (!has_render_data(spec)) throw MissingRenderData();

  std::vector<std::vector<CellMesh>> meshes;
  std::vector<Box> boxes;
  for (const auto& form : forms) {
    auto& ms = meshes.emplace_back();
    Box b;
    for (const auto& c : form) {
      ms.push_back(cell_mesh(spec, c));
      for (const auto& v : ms.back().vertices) b.add(v[0], -v[1]);
    }
    boxes.push_back(b);
  }

  double cw = 0, ch = 0;
  for (const auto& b : boxes) {
    if (b.x1 < b.x0) continue;
    cw = std::max(cw, b.x1 - b.x0);
    ch = std::max(ch, b.y1 - b.y0);
  }
  cw += 2 * kMargin;
  ch += 2 * kMargin;
  const std::size_t cols = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(double(forms.size())))));
  const std::size_t rows = forms.empty() ? 1 : (forms.size() + cols - 1) / cols;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + num(cols * cw * kUnit) + " " +
         num(rows * ch * kUnit) + "\" width=\"" + num(cols * cw * kUnit) + "\" height=\"" +
         num(rows * ch * kUnit) + "\">\n";
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const Box& b = boxes[i];
    const double ox = (i % cols) * cw + kMargin - b.x0 + (cw - 2 * kMargin - (b.x1 - b.x0)) / 2;
    const double oy = (i / cols) * ch + kMargin - b.y0 + (ch - 2 * kMargin - (b.y1 - b.y0)) / 2;
    out += "  <g class=\"form\" data-index=\"" + std::to_string(i) + "\">\n";
    for (const auto& m : meshes[i]) {
      out += "    <polygon data-orbit=\"" + std::to_string(m.orbit) + "\" fill=\"" +
             kPalette[m.orbit % std::size(kPalette)] + "\" stroke=\"#222\" stroke-width=\"1\" points=\"";
      for (std::size_t k = 0; k < m.vertices.size(); ++k) {
        if (k) out += ' ';
        out += num((m.vertices[k][0] + ox) * kUnit) + "," + num((-m.vertices[k][1] + oy) * kUnit);
      }
      out += "\"/>\n";
    }
    out += "  </g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string export_off(const TilingSpec& spec, std::span<const Point> form) {
  if (spec.dim != 3) throw Error("OFF export needs a 3D tiling");
  if (!has_render_data(spec)) throw MissingRenderData();
  std::vector<CellMesh> meshes;
  std::size_t nv = 0, nf = 0;
  for (const auto& c : form) {
    meshes.push_back(cell_mesh(spec, c));
    nv += meshes.back().vertices.size();
    nf += meshes.back().faces.size();
  }
  std::string out = "OFF\n" + std::to_string(nv) + " " + std::to_string(nf) + " 0\n";
  for (const auto& m : meshes)
    for (const auto& v : m.vertices) out += num(v[0]) + " " + num(v[1]) + " " + num(v[2]) + "\n";
  std::size_t base = 0;
  for (const auto& m : meshes) {
    for (const auto& f : m.faces) {
      out += std::to_string(f.size());
      for (auto i : f) out += " " + std::to_string(base + i);
      out += "\n";
    }
    base += m.vertices.size();
  }
  return out;
}

}  // namespace polyform
