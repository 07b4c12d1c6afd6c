#include <algorithm>

#include "polyform/errors.hpp"
#include "polyform/packing.hpp"

namespace polyform {
namespace {

void require_params(std::string_view kind, std::span<const long> params, std::size_t want) {
  if (params.size() != want)
    throw Error(std::string(kind) + " needs " + std::to_string(want) + " parameters, got " +
                std::to_string(params.size()));
  for (long p : params)
    if (p <= 0) throw Error(std::string(kind) + " parameters must be positive");
}

std::vector<Point> closed_box(const TilingSpec& spec, std::span<const long> size) {
  std::vector<Point> out;
  for (const Point& f : fundamental_cells(spec)) {
    // f lies in [0,1)^d, so the lowest shift on every axis is 0.
    std::vector<long> hi(spec.dim), t(spec.dim, 0);
    bool empty = false;
    for (std::size_t i = 0; i < spec.dim; ++i) {
      hi[i] = (Rat(size[i] - 1) - f[i]).floor().get_si();
      if (hi[i] < 0) empty = true;
    }
    if (empty) continue;
    while (true) {
      Point p = f;
      for (std::size_t i = 0; i < spec.dim; ++i) p[i] += Rat(t[i]);
      out.push_back(std::move(p));
      std::size_t axis = 0;
      while (axis < spec.dim && ++t[axis] > hi[axis]) t[axis++] = 0;
      if (axis == spec.dim) break;
    }
  }
  return out;
}

// Octahedra and same-facing tetrahedra strictly inside the tetrahedron with
// apex (1/2,0,0) and edge vectors s*(1/2,1/2,0), s*(1/2,0,1/2), s*(0,1/2,1/2).
std::vector<Point> tet_region(const TilingSpec& spec, long s) {
  const Point octa_rep{0, 0, 0};
  const Point tet_rep{Rat(1, 4), Rat(1, 4), Rat(1, 4)};
  if (spec.dim != 3 || spec.orbits.size() != 2 || spec.orbits[0].rep != octa_rep || spec.orbits[1].rep != tet_rep)
    throw Error("tet-region needs the tet-oct tiling");

  const Point apex{Rat(1, 2), 0, 0};
  RatMatrix edges(3, {Rat(1, 2), Rat(1, 2), 0, Rat(1, 2), 0, Rat(1, 2), 0, Rat(1, 2), Rat(1, 2)});
  RatMatrix to_bary = edges.inverse();
  const Point up_ref{Rat(3, 4), Rat(1, 4), Rat(1, 4)};

  std::vector<Point> out;
  const long reach = (s + 1) / 2 + 1;
  for (const Point& f : fundamental_cells(spec)) {
    for (long x = -1; x <= reach; ++x)
      for (long y = -1; y <= reach; ++y)
        for (long z = -1; z <= reach; ++z) {
          Point p = f + Point{x, y, z};
          Point b = to_bary * (p - apex);
          Rat sum = 0;
          bool inside = true;
          for (std::size_t i = 0; i < 3; ++i) {
            inside = inside && b[i].sign() > 0;
            sum += b[i];
          }
          if (!inside || !(sum < Rat(s))) continue;
          auto matches = classify(spec, p);
          if (matches.empty()) continue;
          bool octa = matches.front().orbit == 0;
          if (!octa) {
            Point twice = p - up_ref;
            for (std::size_t i = 0; i < 3; ++i) twice[i] *= Rat(2);
            if (!twice.is_integral()) continue;
            Rat parity = twice[0] + twice[1] + twice[2];
            if (!(parity.num() % 2 == 0)) continue;
          }
          out.push_back(std::move(p));
        }
  }
  return out;
}

Region finish(const TilingSpec& spec, std::vector<Point> cells, std::span<const Point> exclude) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  for (const Point& e : exclude) {
    auto it = std::lower_bound(cells.begin(), cells.end(), e);
    if (it == cells.end() || *it != e) throw Error("excluded cell " + e.str() + " is not in the region");
    cells.erase(it);
  }
  return {spec.name, std::move(cells)};
}

}  // namespace

Region generate_region(const TilingSpec& spec, std::string_view kind, std::span<const long> params,
                       std::span<const Point> exclude) {
  std::vector<Point> cells;
  if (kind == "rect") {
    if (spec.dim != 2) throw Error("rect regions need a 2D tiling");
    require_params(kind, params, 2);
    cells = closed_box(spec, params);
  } else if (kind == "box" || kind == "bcc-box") {
    if (spec.dim != 3) throw Error(std::string(kind) + " regions need a 3D tiling");
    require_params(kind, params, 3);
    cells = closed_box(spec, params);
  } else if (kind == "tet-region") {
    require_params(kind, params, 1);
    cells = tet_region(spec, params[0]);
  } else {
    throw Error("unknown region kind '" + std::string(kind) + "'");
  }
  return finish(spec, std::move(cells), exclude);
}

Region explicit_region(const TilingSpec& spec, std::span<const Point> cells) {
  for (const Point& c : cells)
    if (!is_cell(spec, c)) throw NotACell(c.str());
  std::vector<Point> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw Error("region lists a cell twice");
  return {spec.name, std::move(sorted)};
}

}  // namespace polyform
