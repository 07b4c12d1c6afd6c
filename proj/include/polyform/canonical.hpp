#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyform/point.hpp"
#include "polyform/tiling.hpp"

namespace polyform {

enum class SymmetryMode {
  Free,      // every orientation
  OneSided,  // orientations with determinant +1
  Fixed,     // translations only
};

std::string_view to_string(SymmetryMode mode);
// Accepts "free", "one-sided", "fixed". Throws Error.
SymmetryMode parse_mode(std::string_view text);

/// Indices of the orientations that make up the mode's group, identity first.
///
/// Fixed mode keeps every orientation whose linear part is the identity. When
/// the lattice basis spans the full translation group that is just the
/// identity; for a sublattice basis it also keeps the centering translations.
std::vector<std::size_t> mode_orientations(const TilingSpec& spec, SymmetryMode mode);

/// Canonical name of a polyform: its lexicographically least sorted,
/// translation-normalized image under the mode's group.
struct CanonicalForm {
  std::vector<Point> cells;
  SymmetryMode mode = SymmetryMode::Free;
  std::string tiling;

  std::size_t size() const { return cells.size(); }
  std::string str() const;
  std::size_t hash() const;

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) {
    return a.mode == b.mode && a.tiling == b.tiling && a.cells == b.cells;
  }
};

/// Shift by the integer vector making each axis minimum land in [0,1), then
/// sort. Throws Error on an empty set.
std::vector<Point> normalize_translation(std::span<const Point> cells);

/// One normalized candidate per orientation of the mode, in mode order.
std::vector<std::vector<Point>> canonical_candidates(const TilingSpec& spec,
                                                     std::span<const Point> cells,
                                                     SymmetryMode mode);

/// Throws NotACell if some cell is not a vertex of the tiling.
CanonicalForm canonical_form(const TilingSpec& spec, std::span<const Point> cells, SymmetryMode mode);

/// Text form: cells joined by ';', coordinates by ','.
std::string serialize_cells(std::span<const Point> cells);
std::vector<Point> parse_cells(std::string_view text);

}  // namespace polyform

template <>
struct std::hash<polyform::CanonicalForm> {
  std::size_t operator()(const polyform::CanonicalForm& f) const noexcept { return f.hash(); }
};
