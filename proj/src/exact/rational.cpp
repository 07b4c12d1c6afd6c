#include "polyform/rational.hpp"

#include <cctype>
#include <functional>
#include <ostream>

#include "polyform/errors.hpp"

namespace polyform {

Rat::Rat(long num, long den) : Rat(mpz_class(num), mpz_class(den)) {}

Rat::Rat(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat Rat::parse(std::string_view text) {
  auto bad = [&] { return ParseError("malformed rational '" + std::string(text) + "'"); };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && text[i] == '-') {
    negative = true;
    ++i;
  }
  std::size_t start = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == start) throw bad();
  mpz_class num(std::string(text.substr(start, i - start)), 10);
  mpz_class den(1);
  if (i < text.size()) {
    if (text[i] != '/') throw bad();
    ++i;
    if (i >= text.size() || text[i] < '1' || text[i] > '9') throw bad();
    std::size_t dstart = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i != text.size()) throw bad();
    den = mpz_class(std::string(text.substr(dstart)), 10);
  }
  if (negative) num = -num;
  return Rat(num, den);
}

mpz_class Rat::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

Rat Rat::frac() const { return *this - Rat(floor(), mpz_class(1)); }

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw Error("division by zero");
  v_ /= o.v_;
  return *this;
}

std::string Rat::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::size_t Rat::hash() const {
  // Small values dominate; fold the low limbs of both fields.
  auto limb = [](const mpz_class& z) -> std::size_t {
    std::size_t h = mpz_size(z.get_mpz_t()) ? mpz_getlimbn(z.get_mpz_t(), 0) : 0;
    return h ^ (static_cast<std::size_t>(sgn(z) < 0) << 63);
  };
  std::size_t h = limb(v_.get_num());
  h ^= limb(v_.get_den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace polyform
