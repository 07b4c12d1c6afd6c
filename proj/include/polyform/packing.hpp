#pragma once

// Exact-cover packing of polyform pieces into finite regions of a tiling.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyform/canonical.hpp"
#include "polyform/tiling.hpp"

namespace polyform {

enum class PlacementGroup {
  Rotations,                // determinant +1 orientations
  RotationsAndReflections,  // every orientation
};

std::string_view to_string(PlacementGroup group);
// Accepts "rotations" and "rotations-and-reflections". Throws Error.
PlacementGroup parse_placement_group(std::string_view text);
// Pieces placed under a group are identified under the matching mode.
SymmetryMode piece_mode(PlacementGroup group);

enum class Multiplicity { Once, Unbounded };
std::string_view to_string(Multiplicity m);
Multiplicity parse_multiplicity(std::string_view text);

struct Region {
  std::string tiling;
  std::vector<Point> cells;  // sorted, distinct

  std::size_t size() const { return cells.size(); }
};

/// Region kinds:
///   rect     2D, params {W, H}: cells in the closed box [0,W-1] x [0,H-1]
///   box      3D, params {A, B, C}: cells in the closed box [0,A-1] x ...
///   bcc-box  3D, same rule; on a body-centered tiling this picks up the
///            A*B*C corner sites and the (A-1)(B-1)(C-1) central sites
///   tet-region  tet-oct, params {s}: octahedra and same-facing tetrahedra
///            strictly inside the size-s tetrahedron
/// `exclude` cells are removed afterwards. Throws Error on an unknown kind,
/// wrong parameter count, nonpositive parameters or excluded non-members.
Region generate_region(const TilingSpec& spec, std::string_view kind, std::span<const long> params,
                       std::span<const Point> exclude = {});
/// Region from an explicit list; every cell must be a cell of the tiling.
Region explicit_region(const TilingSpec& spec, std::span<const Point> cells);

struct Piece {
  CanonicalForm form;
  std::size_t count = 1;  // uses required under Multiplicity::Once
};

struct PieceSet {
  std::vector<Piece> pieces;
  Multiplicity multiplicity = Multiplicity::Once;

  std::size_t total_cells() const;
};

/// Canonicalizes every piece under the group's mode and rejects duplicates.
PieceSet make_piece_set(const TilingSpec& spec, std::span<const std::vector<Point>> pieces, PlacementGroup group,
                        Multiplicity multiplicity = Multiplicity::Once, std::span<const std::size_t> counts = {});

struct Placement {
  std::size_t piece = 0;
  std::size_t orientation = 0;
  Point shift;
  std::vector<Point> cells;  // sorted
};

/// Every image of the piece under the group and integer translations that
/// lies inside the region, deduplicated by covered cells.
std::vector<Placement> placements(const TilingSpec& spec, const Region& region, const CanonicalForm& piece,
                                  PlacementGroup group, std::size_t piece_index = 0);

/// Maps g + t (g in the group, t integral) carrying the region onto itself.
std::vector<AffineMap> region_symmetries(const TilingSpec& spec, const Region& region, PlacementGroup group);

struct PackOptions {
  // Stop after this many solutions; nullopt counts them all.
  std::optional<std::uint64_t> limit;
  std::optional<double> time_limit_seconds;
  bool modulo_region_symmetry = false;
  bool keep_solutions = false;
  // Visit placements in a shuffled order (tests use this to check order
  // independence). Zero keeps generation order.
  std::uint64_t shuffle_seed = 0;
};

struct PackSolution {
  std::vector<std::size_t> placements;  // indices into PackResult::placements
};

struct PackResult {
  std::uint64_t raw_count = 0;
  std::optional<std::uint64_t> modulo_symmetry;
  std::size_t region_symmetry_count = 0;
  bool complete = true;       // false when a limit stopped the search
  bool infeasible = false;    // rejected by the cell-count argument
  std::string stop_reason;
  std::vector<Placement> placements;
  std::vector<PackSolution> solutions;
  std::uint64_t nodes = 0;
  double seconds = 0;
};

PackResult solve_pack(const TilingSpec& spec, const Region& region, const PieceSet& pieces, PlacementGroup group,
                      const PackOptions& options = {});

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Independent post-check of one solution: the placements partition the
/// region, each piece is used within its multiplicity, and each placement
/// canonicalizes back to its piece.
VerifyReport verify_solution(const TilingSpec& spec, const Region& region, const PieceSet& pieces,
                             PlacementGroup group, std::span<const Placement> solution);

struct Instance {
  std::string name;
  std::string description;
  TilingSpec spec;
  Region region;
  PieceSet pieces;
  PlacementGroup group = PlacementGroup::Rotations;
};

/// Loads an instance file. Piece files are resolved relative to the
/// instance's directory. Throws ParseError or Error.
Instance load_instance(const std::filesystem::path& path);
Instance parse_instance(std::string_view json_text, const std::filesystem::path& base_dir = {});

}  // namespace polyform
