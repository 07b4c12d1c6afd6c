#include "polyform/point.hpp"

#include <ostream>

#include "polyform/errors.hpp"

namespace polyform {

Point Point::parse(std::string_view text) {
  std::vector<Rat> coords;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    coords.push_back(Rat::parse(text.substr(start, comma == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Point(std::move(coords));
}

bool Point::is_integral() const {
  for (const auto& x : c_)
    if (!x.is_integer()) return false;
  return true;
}

Point Point::floor() const {
  Point out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out.c_[i] = Rat(c_[i].floor(), mpz_class(1));
  return out;
}

Point Point::normalized() const {
  Point out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out.c_[i] = c_[i].frac();
  return out;
}

std::string Point::str() const {
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += c_[i].str();
  }
  return s;
}

std::size_t Point::hash() const {
  std::size_t h = c_.size();
  for (const auto& x : c_) h ^= x.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Point& Point::operator+=(const Point& o) {
  if (o.dim() != dim()) throw DimensionMismatch(dim(), o.dim());
  for (std::size_t i = 0; i < dim(); ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  if (o.dim() != dim()) throw DimensionMismatch(dim(), o.dim());
  for (std::size_t i = 0; i < dim(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Point Point::operator-() const {
  Point out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out.c_[i] = -c_[i];
  return out;
}

std::strong_ordering point_cmp(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Point& a, const Point& b) { return point_cmp(a, b); }

std::ostream& operator<<(std::ostream& os, const Point& p) { return os << '(' << p.str() << ')'; }

}  // namespace polyform
