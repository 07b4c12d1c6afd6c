#pragma once

// Dancing-links exact cover with counted piece columns.
//
// Cell columns must be covered exactly once. A piece column with count c
// must be hit by exactly c chosen rows; while more than one use remains the
// column is never branched on, and each chosen row is detached from it so
// that the same solution cannot be reached through a different ordering.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace polyform::detail {

class ExactCover {
 public:
  // Columns [0, cells) are cells; the rest are pieces with the given counts.
  ExactCover(std::size_t cells, const std::vector<std::size_t>& piece_counts);

  // Column indices of one row (cells first, then at most one piece column).
  void add_row(const std::vector<std::size_t>& columns);

  struct Limits {
    std::optional<std::uint64_t> solutions;
    std::optional<std::chrono::steady_clock::time_point> deadline;
  };
  enum class Stop { Exhausted, SolutionLimit, Deadline };

  // Calls on_solution with the chosen row ids for every exact cover.
  Stop search(const Limits& limits, const std::function<void(const std::vector<std::size_t>&)>& on_solution);

  std::uint64_t nodes() const { return nodes_; }

 private:
  void cover(std::size_t c);
  void uncover(std::size_t c);
  void select(std::size_t node);
  void unselect(std::size_t node);
  bool recurse();
  long choose_column() const;
  bool branchable(std::size_t c) const { return c < cells_ || remaining_[c] == 1; }

  std::size_t cells_;
  std::size_t columns_;
  // Node arrays. Nodes [0, columns_] are headers, node columns_ is the root.
  std::vector<std::size_t> left_, right_, up_, down_, col_, row_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> remaining_;
  std::vector<std::size_t> row_start_;
  std::size_t root_;
  std::size_t live_cells_;

  std::vector<std::size_t> chosen_;
  const Limits* limits_ = nullptr;
  const std::function<void(const std::vector<std::size_t>&)>* on_solution_ = nullptr;
  std::uint64_t found_ = 0;
  std::uint64_t nodes_ = 0;
  Stop stop_ = Stop::Exhausted;
};

}  // namespace polyform::detail
