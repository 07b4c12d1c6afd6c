#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "polyform/point.hpp"
#include "polyform/rational.hpp"

namespace polyform {

/// Dense row-major square matrix of rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  explicit RatMatrix(std::size_t n) : n_(n), a_(n * n) {}
  RatMatrix(std::size_t n, std::vector<Rat> row_major);

  static RatMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  const Rat& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  Rat& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }

  Rat determinant() const;
  // Throws SingularMatrix.
  RatMatrix inverse() const;
  bool is_integral() const;
  bool is_identity() const;

  Point operator*(const Point& p) const;
  RatMatrix operator*(const RatMatrix& o) const;
  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Rat> a_;
};

/// p -> linear * p + offset, acting on column vectors.
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(RatMatrix linear, Point offset);

  static AffineMap identity(std::size_t dim);
  static AffineMap translation(const Point& t);

  std::size_t dim() const { return linear_.size(); }
  const RatMatrix& linear() const { return linear_; }
  const Point& offset() const { return offset_; }

  Point apply(const Point& p) const;
  Point operator()(const Point& p) const { return apply(p); }

  // True when the linear part is an integer matrix with determinant +-1,
  // i.e. the map sends the translation lattice onto itself.
  bool preserves_lattice() const;
  // Same linear part and offsets differing by an integer vector.
  bool same_coset(const AffineMap& o) const;
  // Representative of the same coset with offset in [0,1)^d.
  AffineMap normalized() const;

  std::string str() const;
  friend bool operator==(const AffineMap&, const AffineMap&) = default;

 private:
  RatMatrix linear_;
  Point offset_;
};

Point affine_apply(const AffineMap& m, const Point& p);
// The map p -> m1(m2(p)).
AffineMap affine_compose(const AffineMap& m1, const AffineMap& m2);
// Throws SingularMatrix.
AffineMap affine_inverse(const AffineMap& m);

}  // namespace polyform
