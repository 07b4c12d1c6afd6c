#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyform/affine.hpp"
#include "polyform/point.hpp"

namespace polyform {

/// Outline of one cell, in lattice coordinates, positioned around the orbit
/// representative. 2D cells list polygon vertices in order; 3D cells also
/// list faces as vertex-index loops.
struct RenderGeometry {
  std::vector<Point> vertices;
  std::vector<std::vector<std::size_t>> faces;
};

/// One vertex orbit of the dual graph: a representative cell and the
/// absolute positions of its neighbors.
struct OrbitSpec {
  int id = 0;
  Point rep;
  std::vector<Point> neighbor_points;
  std::optional<RenderGeometry> render;
};

/// A periodic Euclidean graph described by orbit representatives and
/// coset representatives of Aut(G) modulo the lattice translations.
struct TilingSpec {
  std::string name;
  std::size_t dim = 0;
  std::vector<AffineMap> orientations;  // identity first
  std::vector<OrbitSpec> orbits;
  // embedding[j] is the Cartesian image of basis vector j. Render-only.
  std::optional<std::vector<std::vector<double>>> embedding;
  std::map<std::string, std::string> metadata;
};

/// Witness that a point is a cell: orientations[orientation](rep) + shift.
struct VertexClass {
  std::size_t orbit = 0;
  std::size_t orientation = 0;
  Point shift;

  friend bool operator==(const VertexClass&, const VertexClass&) = default;
};

struct ParseOptions {
  // Reject orientations whose linear part is not integral with det +-1.
  // The validator reports the same condition as a named check, so it can be
  // turned off to inspect a broken file.
  bool require_unimodular = true;
};

TilingSpec parse_tiling(std::istream& input, const ParseOptions& opts = {});
TilingSpec parse_tiling_text(std::string_view text, const ParseOptions& opts = {});
std::string serialize_tiling(const TilingSpec& spec);

/// Built-in tilings shipped with the library.
std::vector<std::string> builtin_tiling_names();
std::optional<std::string_view> builtin_tiling_source(std::string_view name);
/// A built-in name, otherwise a path to a tiling file.
TilingSpec load_tiling(std::string_view name_or_path, const ParseOptions& opts = {});

/// Every (orbit, orientation, integer shift) reconstructing `p`. Empty when
/// `p` is not a cell.
std::vector<VertexClass> classify(const TilingSpec& spec, const Point& p);
bool is_cell(const TilingSpec& spec, const Point& p);

/// Neighbor set of a cell, sorted. Throws NotACell.
std::vector<Point> neighbors(const TilingSpec& spec, const Point& p);
/// Neighbors computed through one particular witness.
std::vector<Point> neighbors_via(const TilingSpec& spec, const VertexClass& vc);

/// Distinct points orientations[k](rep) reduced into [0,1)^d.
std::vector<Point> orbit_translation_classes(const TilingSpec& spec, std::size_t orbit);
/// Union of orbit_translation_classes over all orbits: the cells of one
/// fundamental domain.
std::vector<Point> fundamental_cells(const TilingSpec& spec);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::size_t patch_size = 0;

  bool ok() const;
  const CheckResult* find(std::string_view name) const;
  std::string str() const;
};

namespace checks {
inline constexpr std::string_view kIdentityFirst = "identity-first";
inline constexpr std::string_view kUnimodular = "unimodular";
inline constexpr std::string_view kClosure = "closure";
inline constexpr std::string_view kTotality = "totality";
inline constexpr std::string_view kAdjacencySymmetry = "adjacency-symmetry";
inline constexpr std::string_view kStabilizer = "stabilizer-consistency";
inline constexpr std::string_view kRepresentative = "representative-minimality";
}  // namespace checks

inline constexpr int kDefaultValidationRadius = 4;

/// Mechanical well-formedness checks over a patch of the given graph radius.
ValidationReport validate(const TilingSpec& spec, int radius = kDefaultValidationRadius);

/// Cartesian position of a lattice point (requires an embedding).
std::vector<double> embed(const TilingSpec& spec, const Point& p);

}  // namespace polyform
