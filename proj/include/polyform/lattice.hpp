#pragma once

// Scaled-integer view of a tiling used by the enumeration engine.
//
// Every coordinate that can occur is a multiple of 1/D, where D is the least
// common denominator of the representatives, neighbor points and orientation
// offsets (linear parts are integral). Storing numerators over D keeps the
// arithmetic exact while replacing rationals with int32.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyform/canonical.hpp"
#include "polyform/simd/kernels.hpp"
#include "polyform/tiling.hpp"

namespace polyform {

using Coord = std::int32_t;

class Lattice {
 public:
  // Throws Error when an orientation is not unimodular or when a neighbor
  // set differs between witnesses of the same cell.
  explicit Lattice(const TilingSpec& spec);

  const TilingSpec& spec() const { return spec_; }
  std::size_t dim() const { return dim_; }
  Coord scale() const { return scale_; }

  std::size_t orientation_count() const { return linears_.size(); }
  const std::vector<Coord>& linear(std::size_t k) const { return linears_[k]; }
  const std::vector<Coord>& offset(std::size_t k) const { return offsets_[k]; }

  bool is_cell(const Coord* cell) const { return class_of(cell) >= 0; }
  // Flat list of neighbor offsets (count * dim); empty if not a cell.
  std::span<const Coord> neighbor_offsets(const Coord* cell) const;
  // Orbit index of a cell, -1 if not a cell.
  int orbit_of(const Coord* cell) const;

  // Images orientations[k](rep_i) over all i, k, each dim coords.
  std::vector<Coord> seed_cells() const;

  // Throws Error if a coordinate is not a multiple of 1/D or out of range.
  void to_scaled(const Point& p, Coord* out) const;
  Point to_point(const Coord* cell) const;

  // Canonical text of n cells, as serialize_cells would print them.
  void append_text(const Coord* cells, std::size_t n, std::string& out) const;
  // Inverse of append_text; returns the number of cells. Throws ParseError.
  std::size_t parse_text(std::string_view text, std::vector<Coord>& out) const;

  simd::OrientationPack pack(SymmetryMode mode) const;

 private:
  long class_of(const Coord* cell) const;

  TilingSpec spec_;
  std::size_t dim_ = 0;
  Coord scale_ = 1;
  std::vector<std::vector<Coord>> linears_;
  std::vector<std::vector<Coord>> offsets_;
  std::vector<int> orbit_of_class_;
  // Residue (cell mod D, mixed radix) -> class index or -1.
  std::vector<std::int32_t> residue_class_;
  std::vector<std::uint32_t> class_begin_;  // into nbr_offsets_, in units of cells
  std::vector<Coord> nbr_offsets_;
};

/// Canonical form over scaled coordinates; the engine's hot path.
///
/// Output cells are sorted lexicographically and agree with
/// canonical_form() on the same (exact) input.
class Canonicalizer {
 public:
  Canonicalizer(const Lattice& lattice, SymmetryMode mode,
                const simd::KernelTable& kernels = simd::active_kernels());

  // cells: n * dim in any order. out receives n * dim sorted coordinates.
  void canonicalize(std::span<const Coord> cells, std::size_t n, std::vector<Coord>& out);

  const simd::OrientationPack& pack() const { return pack_; }

 private:
  void gather_sorted(std::size_t k, std::size_t n, std::vector<Coord>& dst);

  const Lattice& lattice_;
  const simd::KernelTable& kernels_;
  simd::OrientationPack pack_;
  std::vector<Coord> transformed_;
  std::vector<Coord> mins_;
  std::vector<std::size_t> ties_;
  std::vector<Coord> candidate_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> order_;
};

/// Lexicographic comparison of flat coordinate sequences of equal length.
inline int compare_coords(const Coord* a, const Coord* b, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace polyform
