#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyform/canonical.hpp"
#include "polyform/errors.hpp"
#include "polyform/lattice.hpp"
#include "polyform/tiling.hpp"

namespace polyform {

/// Canonical forms of one size, stored as flat scaled coordinates
/// (cells * dim values per form) in ascending lexicographic order.
struct FormList {
  std::size_t cells = 0;
  std::size_t dim = 0;
  std::vector<Coord> data;

  std::size_t stride() const { return cells * dim; }
  std::size_t size() const { return stride() ? data.size() / stride() : 0; }
  std::span<const Coord> form(std::size_t i) const { return {data.data() + i * stride(), stride()}; }
  std::size_t bytes() const { return data.size() * sizeof(Coord); }
};

struct Level {
  std::size_t n = 0;
  std::uint64_t count = 0;
  std::optional<FormList> forms;
};

/// Exact-coordinate view of one stored form.
CanonicalForm to_canonical_form(const Lattice& lattice, std::span<const Coord> form, SymmetryMode mode);

struct ExtendOptions {
  // Generate each child only from its canonical parent (the form left after
  // deleting the last non-cut cell of the child). Counts are identical to
  // the plain grow-and-deduplicate loop.
  bool pruned = false;
  unsigned threads = 1;
  std::optional<std::uint64_t> memory_limit;  // bytes
};

/// Thrown by extend when the memory budget is exceeded.
class MemoryLimitExceeded : public Error {
 public:
  MemoryLimitExceeded(std::size_t level, std::uint64_t bytes);
  std::size_t level() const { return level_; }

 private:
  std::size_t level_;
};

/// Level 1: the canonical singletons of every orbit image.
Level initial_level(const Lattice& lattice, SymmetryMode mode);

/// Level n+1 from the complete level n (forms must be retained).
Level extend(const Lattice& lattice, const Level& level, SymmetryMode mode,
             const ExtendOptions& opts = {});

struct EnumerateOptions {
  bool retain_forms = false;
  bool pruned = false;
  unsigned threads = 1;
  // Directory receiving one form file per level. Without retain_forms the
  // previous level is then streamed back from disk instead of kept in memory.
  std::optional<std::filesystem::path> emit_path;
  std::optional<std::uint64_t> memory_limit;
};

struct LevelCount {
  std::size_t n = 0;
  std::uint64_t count = 0;
  double seconds = 0;
};

struct EnumerationResult {
  std::string tiling;
  SymmetryMode mode = SymmetryMode::Free;
  std::vector<LevelCount> counts;
  bool partial = false;
  std::string abort_reason;
  double seconds = 0;
  std::uint64_t peak_bytes = 0;
  std::vector<std::filesystem::path> form_files;
  std::vector<Level> levels;  // only with retain_forms
};

EnumerationResult enumerate_counts(const TilingSpec& spec, SymmetryMode mode, std::size_t n_max,
                                   const EnumerateOptions& opts = {});

/// Form emission files.
std::filesystem::path form_file_name(const std::filesystem::path& dir, const TilingSpec& spec,
                                     SymmetryMode mode, std::size_t n);
void write_form_file(const std::filesystem::path& path, const Lattice& lattice, SymmetryMode mode,
                     const FormList& forms);
struct FormFile {
  std::string tiling;
  std::optional<SymmetryMode> mode;
  std::optional<std::size_t> n;
  FormList forms;  // in file order
};
FormFile read_form_file(const std::filesystem::path& path, const Lattice& lattice);

/// True if the cells induce a connected subgraph.
bool is_connected(const Lattice& lattice, std::span<const Coord> cells, std::size_t n);

/// Independent count oracle: grows every connected cell set that contains a
/// fundamental-domain cell, then sorts them into classes by directly testing
/// orientation + integer translation equivalence. No canonical forms are
/// involved. `patch_radius` bounds the graph distance from the anchors;
/// the default (n_max - 1) always suffices, smaller values throw if a set
/// would leave the patch.
std::vector<std::uint64_t> brute_oracle(const TilingSpec& spec, SymmetryMode mode, std::size_t n_max,
                                        std::optional<int> patch_radius = std::nullopt);

}  // namespace polyform
