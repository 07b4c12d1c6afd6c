#include <algorithm>
#include <set>

#include "polyform/errors.hpp"
#include "polyform/tiling.hpp"

namespace polyform {

std::vector<VertexClass> classify(const TilingSpec& spec, const Point& p) {
  if (p.dim() != spec.dim) throw DimensionMismatch(spec.dim, p.dim());
  std::vector<VertexClass> out;
  for (std::size_t i = 0; i < spec.orbits.size(); ++i) {
    for (std::size_t k = 0; k < spec.orientations.size(); ++k) {
      Point t = p - spec.orientations[k].apply(spec.orbits[i].rep);
      if (t.is_integral()) out.push_back({i, k, std::move(t)});
    }
  }
  return out;
}

bool is_cell(const TilingSpec& spec, const Point& p) {
  if (p.dim() != spec.dim) throw DimensionMismatch(spec.dim, p.dim());
  for (const auto& orbit : spec.orbits)
    for (const auto& g : spec.orientations)
      if ((p - g.apply(orbit.rep)).is_integral()) return true;
  return false;
}

std::vector<Point> neighbors_via(const TilingSpec& spec, const VertexClass& vc) {
  const AffineMap& g = spec.orientations.at(vc.orientation);
  std::vector<Point> out;
  out.reserve(spec.orbits.at(vc.orbit).neighbor_points.size());
  for (const auto& u : spec.orbits[vc.orbit].neighbor_points) out.push_back(g.apply(u) + vc.shift);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Point> neighbors(const TilingSpec& spec, const Point& p) {
  if (p.dim() != spec.dim) throw DimensionMismatch(spec.dim, p.dim());
  for (std::size_t i = 0; i < spec.orbits.size(); ++i) {
    for (std::size_t k = 0; k < spec.orientations.size(); ++k) {
      Point t = p - spec.orientations[k].apply(spec.orbits[i].rep);
      if (t.is_integral()) return neighbors_via(spec, {i, k, std::move(t)});
    }
  }
  throw NotACell(p.str());
}

std::vector<Point> orbit_translation_classes(const TilingSpec& spec, std::size_t orbit) {
  if (orbit >= spec.orbits.size())
    throw Error("orbit index " + std::to_string(orbit) + " out of range");
  std::set<Point> classes;
  for (const auto& g : spec.orientations) classes.insert(g.apply(spec.orbits[orbit].rep).normalized());
  return {classes.begin(), classes.end()};
}

std::vector<Point> fundamental_cells(const TilingSpec& spec) {
  std::set<Point> all;
  for (std::size_t i = 0; i < spec.orbits.size(); ++i)
    for (auto& p : orbit_translation_classes(spec, i)) all.insert(std::move(p));
  return {all.begin(), all.end()};
}

std::vector<double> embed(const TilingSpec& spec, const Point& p) {
  if (!spec.embedding) throw Error("tiling '" + spec.name + "' has no embedding");
  std::vector<double> out(spec.dim, 0.0);
  for (std::size_t j = 0; j < spec.dim; ++j) {
    double c = p[j].to_double();
    for (std::size_t i = 0; i < spec.dim; ++i) out[i] += c * (*spec.embedding)[j][i];
  }
  return out;
}

}  // namespace polyform
