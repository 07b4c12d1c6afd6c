#pragma once

// Open-addressing set of fixed-stride coordinate arrays.

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <vector>

#include "polyform/lattice.hpp"

namespace polyform::detail {

inline std::uint64_t hash_coords(const Coord* p, std::size_t len) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ len;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= static_cast<std::uint32_t>(p[i]);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 32;
  }
  h ^= h >> 29;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 32;
  return h;
}

class FormSet {
 public:
  explicit FormSet(std::size_t stride = 0) : stride_(stride) {}

  std::size_t size() const { return size_; }
  std::size_t stride() const { return stride_; }
  const std::vector<Coord>& arena() const { return arena_; }
  std::size_t bytes() const {
    return arena_.capacity() * sizeof(Coord) + slots_.capacity() * sizeof(std::uint32_t);
  }

  bool insert(const Coord* form) { return insert(form, hash_coords(form, stride_)); }

  bool insert(const Coord* form, std::uint64_t h) {
    if ((size_ + 1) * 4 > slots_.size() * 3) grow();
    std::size_t mask = slots_.size() - 1;
    for (std::size_t i = h & mask;; i = (i + 1) & mask) {
      std::uint32_t s = slots_[i];
      if (s == 0) {
        arena_.insert(arena_.end(), form, form + stride_);
        slots_[i] = static_cast<std::uint32_t>(++size_);
        return true;
      }
      if (std::memcmp(&arena_[(s - 1) * stride_], form, stride_ * sizeof(Coord)) == 0) return false;
    }
  }

  void clear() {
    arena_ = {};
    slots_ = {};
    size_ = 0;
  }

  std::vector<Coord> release() {
    slots_ = {};
    size_ = 0;
    return std::move(arena_);
  }

 private:
  void grow() {
    std::size_t cap = slots_.empty() ? 64 : slots_.size() * 2;
    std::vector<std::uint32_t> fresh(cap, 0);
    for (std::size_t idx = 0; idx < size_; ++idx) {
      std::uint64_t h = hash_coords(&arena_[idx * stride_], stride_);
      for (std::size_t i = h & (cap - 1);; i = (i + 1) & (cap - 1)) {
        if (fresh[i] == 0) {
          fresh[i] = static_cast<std::uint32_t>(idx + 1);
          break;
        }
      }
    }
    slots_.swap(fresh);
  }

  std::size_t stride_;
  std::size_t size_ = 0;
  std::vector<Coord> arena_;
  std::vector<std::uint32_t> slots_;
};

}  // namespace polyform::detail
