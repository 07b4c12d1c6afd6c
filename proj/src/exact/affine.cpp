#include "polyform/affine.hpp"

#include "polyform/errors.hpp"

namespace polyform {

RatMatrix::RatMatrix(std::size_t n, std::vector<Rat> row_major) : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n * n) throw DimensionMismatch(n * n, a_.size());
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Rat RatMatrix::determinant() const {
  // Gaussian elimination over Q.
  RatMatrix m = *this;
  Rat det = 1;
  for (std::size_t c = 0; c < n_; ++c) {
    std::size_t pivot = c;
    while (pivot < n_ && m(pivot, c).is_zero()) ++pivot;
    if (pivot == n_) return 0;
    if (pivot != c) {
      for (std::size_t k = 0; k < n_; ++k) std::swap(m(pivot, k), m(c, k));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n_; ++r) {
      if (m(r, c).is_zero()) continue;
      Rat f = m(r, c) / m(c, c);
      for (std::size_t k = c; k < n_; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

RatMatrix RatMatrix::inverse() const {
  RatMatrix m = *this;
  RatMatrix inv = identity(n_);
  for (std::size_t c = 0; c < n_; ++c) {
    std::size_t pivot = c;
    while (pivot < n_ && m(pivot, c).is_zero()) ++pivot;
    if (pivot == n_) throw SingularMatrix();
    for (std::size_t k = 0; k < n_; ++k) {
      std::swap(m(pivot, k), m(c, k));
      std::swap(inv(pivot, k), inv(c, k));
    }
    Rat p = m(c, c);
    for (std::size_t k = 0; k < n_; ++k) {
      m(c, k) /= p;
      inv(c, k) /= p;
    }
    for (std::size_t r = 0; r < n_; ++r) {
      if (r == c || m(r, c).is_zero()) continue;
      Rat f = m(r, c);
      for (std::size_t k = 0; k < n_; ++k) {
        m(r, k) -= f * m(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

bool RatMatrix::is_integral() const {
  for (const auto& x : a_)
    if (!x.is_integer()) return false;
  return true;
}

bool RatMatrix::is_identity() const { return *this == identity(n_); }

Point RatMatrix::operator*(const Point& p) const {
  if (p.dim() != n_) throw DimensionMismatch(n_, p.dim());
  Point out(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    Rat acc = 0;
    for (std::size_t c = 0; c < n_; ++c) {
      if (!a_[r * n_ + c].is_zero()) acc += a_[r * n_ + c] * p[c];
    }
    out[r] = acc;
  }
  return out;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (o.n_ != n_) throw DimensionMismatch(n_, o.n_);
  RatMatrix out(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) {
      Rat acc = 0;
      for (std::size_t k = 0; k < n_; ++k) acc += (*this)(r, k) * o(k, c);
      out(r, c) = acc;
    }
  return out;
}

AffineMap::AffineMap(RatMatrix linear, Point offset)
    : linear_(std::move(linear)), offset_(std::move(offset)) {
  if (offset_.dim() != linear_.size()) throw DimensionMismatch(linear_.size(), offset_.dim());
}

AffineMap AffineMap::identity(std::size_t dim) {
  return AffineMap(RatMatrix::identity(dim), Point(dim));
}

AffineMap AffineMap::translation(const Point& t) {
  return AffineMap(RatMatrix::identity(t.dim()), t);
}

Point AffineMap::apply(const Point& p) const { return linear_ * p + offset_; }

bool AffineMap::preserves_lattice() const {
  if (!linear_.is_integral()) return false;
  Rat det = linear_.determinant();
  return det == Rat(1) || det == Rat(-1);
}

bool AffineMap::same_coset(const AffineMap& o) const {
  if (o.dim() != dim()) throw DimensionMismatch(dim(), o.dim());
  return linear_ == o.linear_ && (offset_ - o.offset_).is_integral();
}

AffineMap AffineMap::normalized() const { return AffineMap(linear_, offset_.normalized()); }

std::string AffineMap::str() const {
  std::string s = "[";
  for (std::size_t r = 0; r < dim(); ++r) {
    if (r) s += ';';
    for (std::size_t c = 0; c < dim(); ++c) {
      if (c) s += ',';
      s += linear_(r, c).str();
    }
  }
  return s + "|" + offset_.str() + "]";
}

Point affine_apply(const AffineMap& m, const Point& p) {
  if (p.dim() != m.dim()) throw DimensionMismatch(m.dim(), p.dim());
  return m.apply(p);
}

AffineMap affine_compose(const AffineMap& m1, const AffineMap& m2) {
  if (m1.dim() != m2.dim()) throw DimensionMismatch(m1.dim(), m2.dim());
  return AffineMap(m1.linear() * m2.linear(), m1.linear() * m2.offset() + m1.offset());
}

AffineMap affine_inverse(const AffineMap& m) {
  RatMatrix inv = m.linear().inverse();
  return AffineMap(inv, -(inv * m.offset()));
}

}  // namespace polyform
