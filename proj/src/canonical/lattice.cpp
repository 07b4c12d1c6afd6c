#include "polyform/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "polyform/errors.hpp"

namespace polyform {

namespace {

constexpr Coord kMaxMagnitude = Coord{1} << 26;
constexpr std::size_t kMaxResidues = std::size_t{1} << 24;

Coord checked_coord(const mpz_class& z) {
  if (!z.fits_sint_p() || abs(z) >= kMaxMagnitude)
    throw Error("coordinate " + z.get_str() + " is out of the engine's range");
  return static_cast<Coord>(z.get_si());
}

Coord mod(Coord a, Coord m) {
  Coord r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Lattice::Lattice(const TilingSpec& spec) : spec_(spec), dim_(spec.dim) {
  mpz_class den = 1;
  auto absorb = [&](const Point& p) {
    for (const auto& x : p) den = lcm(den, x.den());
  };
  for (const auto& g : spec.orientations) {
    if (!g.preserves_lattice())
      throw Error("orientation " + g.str() + " does not preserve lattice");
    absorb(g.offset());
  }
  for (const auto& o : spec.orbits) {
    absorb(o.rep);
    for (const auto& u : o.neighbor_points) absorb(u);
  }
  scale_ = checked_coord(den);

  std::size_t residues = 1;
  for (std::size_t j = 0; j < dim_; ++j) {
    residues *= static_cast<std::size_t>(scale_);
    if (residues > kMaxResidues) throw Error("tiling denominators are too large for the engine");
  }

  for (const auto& g : spec.orientations) {
    std::vector<Coord> lin(dim_ * dim_), off(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) lin[i * dim_ + j] = checked_coord(g.linear()(i, j).num());
      off[i] = checked_coord(g.offset()[i].num() * (den / g.offset()[i].den()));
    }
    linears_.push_back(std::move(lin));
    offsets_.push_back(std::move(off));
  }

  residue_class_.assign(residues, -1);
  class_begin_.push_back(0);
  std::vector<Coord> rep(dim_), image(dim_), nb(dim_);
  for (std::size_t i = 0; i < spec.orbits.size(); ++i) {
    const OrbitSpec& orbit = spec.orbits[i];
    to_scaled(orbit.rep, rep.data());
    for (std::size_t k = 0; k < orientation_count(); ++k) {
      auto apply = [&](const Coord* x, Coord* y) {
        for (std::size_t r = 0; r < dim_; ++r) {
          Coord acc = offsets_[k][r];
          for (std::size_t c = 0; c < dim_; ++c) acc += linears_[k][r * dim_ + c] * x[c];
          y[r] = acc;
        }
      };
      apply(rep.data(), image.data());
      // Offsets relative to the cell: image(u) - image(rep).
      std::vector<std::vector<Coord>> rel;
      for (const auto& u : orbit.neighbor_points) {
        std::vector<Coord> su(dim_);
        to_scaled(u, su.data());
        apply(su.data(), nb.data());
        for (std::size_t r = 0; r < dim_; ++r) su[r] = nb[r] - image[r];
        rel.push_back(std::move(su));
      }
      std::sort(rel.begin(), rel.end());

      std::size_t idx = 0, radix = 1;
      for (std::size_t r = 0; r < dim_; ++r) {
        idx += static_cast<std::size_t>(mod(image[r], scale_)) * radix;
        radix *= static_cast<std::size_t>(scale_);
      }
      if (residue_class_[idx] >= 0) {
        auto cls = static_cast<std::size_t>(residue_class_[idx]);
        std::vector<std::vector<Coord>> have;
        for (std::uint32_t c = class_begin_[cls]; c < class_begin_[cls + 1]; ++c)
          have.emplace_back(nbr_offsets_.begin() + c * dim_, nbr_offsets_.begin() + (c + 1) * dim_);
        if (have != rel || orbit_of_class_[cls] != static_cast<int>(i))
          throw Error("inconsistent neighbor sets for cell " + to_point(image.data()).str());
        continue;
      }
      residue_class_[idx] = static_cast<std::int32_t>(orbit_of_class_.size());
      orbit_of_class_.push_back(static_cast<int>(i));
      for (const auto& v : rel) nbr_offsets_.insert(nbr_offsets_.end(), v.begin(), v.end());
      class_begin_.push_back(static_cast<std::uint32_t>(nbr_offsets_.size() / dim_));
    }
  }
}

long Lattice::class_of(const Coord* cell) const {
  std::size_t idx = 0, radix = 1;
  for (std::size_t r = 0; r < dim_; ++r) {
    idx += static_cast<std::size_t>(mod(cell[r], scale_)) * radix;
    radix *= static_cast<std::size_t>(scale_);
  }
  return residue_class_[idx];
}

std::span<const Coord> Lattice::neighbor_offsets(const Coord* cell) const {
  long cls = class_of(cell);
  if (cls < 0) return {};
  auto c = static_cast<std::size_t>(cls);
  return {nbr_offsets_.data() + class_begin_[c] * dim_,
          (class_begin_[c + 1] - class_begin_[c]) * dim_};
}

int Lattice::orbit_of(const Coord* cell) const {
  long cls = class_of(cell);
  return cls < 0 ? -1 : orbit_of_class_[static_cast<std::size_t>(cls)];
}

std::vector<Coord> Lattice::seed_cells() const {
  std::vector<Coord> out;
  std::vector<Coord> rep(dim_);
  for (const auto& orbit : spec_.orbits) {
    to_scaled(orbit.rep, rep.data());
    for (std::size_t k = 0; k < orientation_count(); ++k) {
      for (std::size_t r = 0; r < dim_; ++r) {
        Coord acc = offsets_[k][r];
        for (std::size_t c = 0; c < dim_; ++c) acc += linears_[k][r * dim_ + c] * rep[c];
        out.push_back(acc);
      }
    }
  }
  return out;
}

void Lattice::to_scaled(const Point& p, Coord* out) const {
  if (p.dim() != dim_) throw DimensionMismatch(dim_, p.dim());
  for (std::size_t i = 0; i < dim_; ++i) {
    mpq_class v = p[i].value() * scale_;
    if (v.get_den() != 1) throw Error("coordinate " + p[i].str() + " is not on this tiling's grid");
    out[i] = checked_coord(v.get_num());
  }
}

Point Lattice::to_point(const Coord* cell) const {
  Point p(dim_);
  for (std::size_t i = 0; i < dim_; ++i) p[i] = Rat(cell[i], scale_);
  return p;
}

void Lattice::append_text(const Coord* cells, std::size_t n, std::string& out) const {
  char buf[16];
  for (std::size_t c = 0; c < n; ++c) {
    if (c) out += ';';
    for (std::size_t i = 0; i < dim_; ++i) {
      if (i) out += ',';
      Coord x = cells[c * dim_ + i];
      Coord g = std::gcd(x, scale_);
      auto r = std::to_chars(buf, buf + sizeof buf, x / g);
      out.append(buf, r.ptr);
      if (scale_ / g != 1) {
        out += '/';
        r = std::to_chars(buf, buf + sizeof buf, scale_ / g);
        out.append(buf, r.ptr);
      }
    }
  }
}

std::size_t Lattice::parse_text(std::string_view text, std::vector<Coord>& out) const {
  auto bad = [&] { return ParseError("malformed cell list '" + std::string(text) + "'"); };
  const char* p = text.data();
  const char* end = p + text.size();
  std::size_t coords = 0;
  while (true) {
    long long num = 0, den = 1;
    auto r = std::from_chars(p, end, num);
    if (r.ec != std::errc()) throw bad();
    p = r.ptr;
    if (p < end && *p == '/') {
      r = std::from_chars(p + 1, end, den);
      if (r.ec != std::errc() || den <= 0) throw bad();
      p = r.ptr;
    }
    if (scale_ % den != 0) throw Error("coordinate in '" + std::string(text) + "' is not on this tiling's grid");
    long long v = num * (scale_ / den);
    if (v >= kMaxMagnitude || v <= -kMaxMagnitude) throw bad();
    out.push_back(static_cast<Coord>(v));
    ++coords;
    if (p == end) break;
    if (*p != ',' && *p != ';') throw bad();
    if (*p == ';' && coords % dim_ != 0) throw bad();
    ++p;
  }
  if (coords % dim_ != 0) throw bad();
  return coords / dim_;
}

simd::OrientationPack Lattice::pack(SymmetryMode mode) const {
  std::vector<std::vector<Coord>> lin, off;
  for (std::size_t k : mode_orientations(spec_, mode)) {
    lin.push_back(linears_[k]);
    off.push_back(offsets_[k]);
  }
  return simd::OrientationPack::build(dim_, scale_, lin, off);
}

Canonicalizer::Canonicalizer(const Lattice& lattice, SymmetryMode mode, const simd::KernelTable& kernels)
    : lattice_(lattice), kernels_(kernels), pack_(lattice.pack(mode)) {}

void Canonicalizer::gather_sorted(std::size_t k, std::size_t n, std::vector<Coord>& dst) {
  const std::size_t d = pack_.dim, P = pack_.padded;
  dst.resize(n * d);
  constexpr unsigned kBits = 21;
  constexpr Coord kLimit = Coord{1} << kBits;
  bool packable = d <= 3;
  if (packable) {
    keys_.resize(n);
    for (std::size_t c = 0; c < n && packable; ++c) {
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < d; ++i) {
        Coord x = transformed_[(c * d + i) * P + k];
        if (x < 0 || x >= kLimit) {
          packable = false;
          break;
        }
        key = (key << kBits) | static_cast<std::uint64_t>(x);
      }
      keys_[c] = key;
    }
  }
  if (packable) {
    std::sort(keys_.begin(), keys_.begin() + static_cast<std::ptrdiff_t>(n));
    for (std::size_t c = 0; c < n; ++c) {
      std::uint64_t key = keys_[c];
      for (std::size_t i = d; i-- > 0;) {
        dst[c * d + i] = static_cast<Coord>(key & (kLimit - 1));
        key >>= kBits;
      }
    }
    return;
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  auto at = [&](std::uint32_t c, std::size_t i) { return transformed_[(c * d + i) * P + k]; };
  std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
    for (std::size_t i = 0; i < d; ++i)
      if (at(a, i) != at(b, i)) return at(a, i) < at(b, i);
    return false;
  });
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < d; ++i) dst[c * d + i] = at(order_[c], i);
}

void Canonicalizer::canonicalize(std::span<const Coord> cells, std::size_t n, std::vector<Coord>& out) {
  const std::size_t d = pack_.dim, P = pack_.padded;
  transformed_.resize(n * d * P);
  mins_.resize(d * P);
  kernels_.transform_normalize(pack_, cells.data(), n, transformed_.data());
  kernels_.lex_min(pack_, transformed_.data(), n, mins_.data());

  ties_.clear();
  ties_.push_back(0);
  for (std::size_t k = 1; k < pack_.count; ++k) {
    int c = 0;
    for (std::size_t i = 0; i < d && c == 0; ++i) {
      Coord a = mins_[i * P + k], b = mins_[i * P + ties_.front()];
      c = a < b ? -1 : (a > b ? 1 : 0);
    }
    if (c < 0) {
      ties_.clear();
      ties_.push_back(k);
    } else if (c == 0) {
      ties_.push_back(k);
    }
  }
  gather_sorted(ties_.front(), n, out);
  for (std::size_t t = 1; t < ties_.size(); ++t) {
    gather_sorted(ties_[t], n, candidate_);
    if (compare_coords(candidate_.data(), out.data(), n * d) < 0) out.swap(candidate_);
  }
}

}  // namespace polyform
