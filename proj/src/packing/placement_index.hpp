#pragma once

// Region cells in scaled coordinates with constant-time membership.

#include <string>
#include <unordered_map>
#include <vector>

#include "polyform/lattice.hpp"
#include "polyform/packing.hpp"

namespace polyform::detail {

struct PlacementIndex {
  PlacementIndex(const TilingSpec& spec, const Region& region);

  // Region index of a scaled cell, or -1.
  long find(const Coord* cell) const;

  // Distinct covered-cell sets (sorted region indices) of every placement
  // of the piece, optionally with the orientation and shift producing each.
  std::vector<std::vector<std::size_t>> images(std::span<const Point> cells, PlacementGroup group,
                                               std::vector<std::size_t>* orientations = nullptr,
                                               std::vector<Point>* shifts = nullptr) const;

  std::string key(const Coord* cell) const {
    return std::string(reinterpret_cast<const char*>(cell), dim * sizeof(Coord));
  }

  Lattice lattice;
  std::size_t dim;
  std::vector<Coord> scaled;
  std::unordered_map<std::string, std::size_t> index;
};

}  // namespace polyform::detail
