#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "polyform/rational.hpp"

namespace polyform {

/// A point of R^d in lattice-basis coordinates.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : c_(dim) {}
  explicit Point(std::vector<Rat> coords) : c_(std::move(coords)) {}
  Point(std::initializer_list<Rat> coords) : c_(coords) {}

  // Comma-separated rationals, e.g. "8/21,2/21".
  static Point parse(std::string_view text);

  std::size_t dim() const { return c_.size(); }
  const Rat& operator[](std::size_t i) const { return c_[i]; }
  Rat& operator[](std::size_t i) { return c_[i]; }
  const std::vector<Rat>& coords() const { return c_; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }

  bool is_integral() const;
  // Componentwise floor (an integer point).
  Point floor() const;
  // The translate of this point lying in [0,1)^d.
  Point normalized() const;

  std::string str() const;
  std::size_t hash() const;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  Point operator-() const;

  friend bool operator==(const Point& a, const Point& b) { return a.c_ == b.c_; }
  // Lexicographic; throws DimensionMismatch.
  friend std::strong_ordering operator<=>(const Point& a, const Point& b);

 private:
  std::vector<Rat> c_;
};

/// Lexicographic total order, coordinate 0 first.
std::strong_ordering point_cmp(const Point& a, const Point& b);

std::ostream& operator<<(std::ostream& os, const Point& p);

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept { return p.hash(); }
};

}  // namespace polyform

template <>
struct std::hash<polyform::Point> {
  std::size_t operator()(const polyform::Point& p) const noexcept { return p.hash(); }
};
