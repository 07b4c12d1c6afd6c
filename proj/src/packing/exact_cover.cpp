#include "exact_cover.hpp"

#include <limits>

#include "polyform/errors.hpp"

namespace polyform::detail {

ExactCover::ExactCover(std::size_t cells, const std::vector<std::size_t>& piece_counts)
    : cells_(cells), columns_(cells + piece_counts.size()), root_(cells + piece_counts.size()),
      live_cells_(cells) {
  const std::size_t headers = columns_ + 1;
  left_.resize(headers);
  right_.resize(headers);
  up_.resize(headers);
  down_.resize(headers);
  col_.resize(headers);
  row_.assign(headers, std::numeric_limits<std::size_t>::max());
  size_.assign(columns_, 0);
  remaining_.assign(columns_, 1);
  for (std::size_t p = 0; p < piece_counts.size(); ++p) remaining_[cells + p] = piece_counts[p];
  for (std::size_t h = 0; h < headers; ++h) {
    left_[h] = h == 0 ? root_ : h - 1;
    right_[h] = h == root_ ? 0 : h + 1;
    up_[h] = down_[h] = col_[h] = h;
  }
}

void ExactCover::add_row(const std::vector<std::size_t>& columns) {
  if (columns.empty()) throw Error("empty exact-cover row");
  const std::size_t row = row_start_.size();
  const std::size_t first = left_.size();
  row_start_.push_back(first);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    std::size_t c = columns[i];
    std::size_t node = left_.size();
    left_.push_back(i == 0 ? node : node - 1);
    right_.push_back(first);
    if (i > 0) right_[node - 1] = node;
    left_[first] = node;
    up_.push_back(up_[c]);
    down_.push_back(c);
    down_[up_[c]] = node;
    up_[c] = node;
    col_.push_back(c);
    row_.push_back(row);
    ++size_[c];
  }
}

void ExactCover::cover(std::size_t c) {
  right_[left_[c]] = right_[c];
  left_[right_[c]] = left_[c];
  if (c < cells_) --live_cells_;
  for (std::size_t i = down_[c]; i != c; i = down_[i])
    for (std::size_t j = right_[i]; j != i; j = right_[j]) {
      up_[down_[j]] = up_[j];
      down_[up_[j]] = down_[j];
      --size_[col_[j]];
    }
}

void ExactCover::uncover(std::size_t c) {
  for (std::size_t i = up_[c]; i != c; i = up_[i])
    for (std::size_t j = left_[i]; j != i; j = left_[j]) {
      ++size_[col_[j]];
      up_[down_[j]] = j;
      down_[up_[j]] = j;
    }
  if (c < cells_) ++live_cells_;
  right_[left_[c]] = c;
  left_[right_[c]] = c;
}

// Takes the row of `node`. Covering the branch column has already detached
// the row from every other column, so a counted piece column with uses to
// spare only needs its count lowered. A count of zero marks a piece column
// covered on its last use.
void ExactCover::select(std::size_t node) {
  for (std::size_t j = right_[node]; j != node; j = right_[j]) {
    std::size_t c = col_[j];
    if (c >= cells_ && remaining_[c] > 1) {
      --remaining_[c];
    } else {
      if (c >= cells_) remaining_[c] = 0;
      cover(c);
    }
  }
}

void ExactCover::unselect(std::size_t node) {
  for (std::size_t j = left_[node]; j != node; j = left_[j]) {
    std::size_t c = col_[j];
    if (c < cells_) {
      uncover(c);
    } else if (remaining_[c] == 0) {
      remaining_[c] = 1;
      uncover(c);
    } else {
      ++remaining_[c];
    }
  }
}

long ExactCover::choose_column() const {
  long best = -1;
  std::size_t best_size = std::numeric_limits<std::size_t>::max();
  for (std::size_t c = right_[root_]; c != root_; c = right_[c]) {
    if (!branchable(c) || size_[c] >= best_size) continue;
    best = static_cast<long>(c);
    best_size = size_[c];
    if (best_size == 0) break;
  }
  return best;
}

// Returns false when the search must stop.
bool ExactCover::recurse() {
  ++nodes_;
  if (limits_->deadline && (nodes_ & 0xfff) == 0 && std::chrono::steady_clock::now() > *limits_->deadline) {
    stop_ = Stop::Deadline;
    return false;
  }
  if (live_cells_ == 0) {
    ++found_;
    (*on_solution_)(chosen_);
    if (limits_->solutions && found_ >= *limits_->solutions) {
      stop_ = Stop::SolutionLimit;
      return false;
    }
    return true;
  }
  long chosen = choose_column();
  if (chosen < 0 || size_[static_cast<std::size_t>(chosen)] == 0) return true;
  const std::size_t c = static_cast<std::size_t>(chosen);
  if (c >= cells_) remaining_[c] = 0;
  cover(c);
  bool go_on = true;
  for (std::size_t r = down_[c]; r != c && go_on; r = down_[r]) {
    chosen_.push_back(row_[r]);
    select(r);
    go_on = recurse();
    unselect(r);
    chosen_.pop_back();
  }
  uncover(c);
  if (c >= cells_) remaining_[c] = 1;
  return go_on;
}

ExactCover::Stop ExactCover::search(const Limits& limits,
                                    const std::function<void(const std::vector<std::size_t>&)>& on_solution) {
  limits_ = &limits;
  on_solution_ = &on_solution;
  found_ = 0;
  stop_ = Stop::Exhausted;
  if (limits.solutions && *limits.solutions == 0) return Stop::SolutionLimit;
  recurse();
  return stop_;
}

}  // namespace polyform::detail
