#include "polyform/canonical.hpp"

#include <algorithm>
#include <functional>

#include "polyform/errors.hpp"

namespace polyform {

std::string_view to_string(SymmetryMode mode) {
  switch (mode) {
    case SymmetryMode::Free: return "free";
    case SymmetryMode::OneSided: return "one-sided";
    case SymmetryMode::Fixed: return "fixed";
  }
  return "?";
}

SymmetryMode parse_mode(std::string_view text) {
  if (text == "free") return SymmetryMode::Free;
  if (text == "one-sided" || text == "onesided") return SymmetryMode::OneSided;
  if (text == "fixed") return SymmetryMode::Fixed;
  throw Error("unknown symmetry mode '" + std::string(text) + "' (free|one-sided|fixed)");
}

std::vector<std::size_t> mode_orientations(const TilingSpec& spec, SymmetryMode mode) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < spec.orientations.size(); ++k) {
    const RatMatrix& lin = spec.orientations[k].linear();
    bool keep = false;
    switch (mode) {
      case SymmetryMode::Free: keep = true; break;
      case SymmetryMode::OneSided: keep = lin.determinant() == Rat(1); break;
      case SymmetryMode::Fixed: keep = lin.is_identity(); break;
    }
    if (keep) out.push_back(k);
  }
  return out;
}

std::string CanonicalForm::str() const { return serialize_cells(cells); }

std::size_t CanonicalForm::hash() const { return std::hash<std::string>{}(str()); }

std::vector<Point> normalize_translation(std::span<const Point> cells) {
  if (cells.empty()) throw Error("cannot normalize an empty cell set");
  const std::size_t d = cells.front().dim();
  Point shift(d);
  for (std::size_t j = 0; j < d; ++j) {
    Rat lo = cells.front()[j];
    for (const auto& c : cells) {
      if (c.dim() != d) throw DimensionMismatch(d, c.dim());
      if (c[j] < lo) lo = c[j];
    }
    shift[j] = Rat(-lo.floor(), mpz_class(1));
  }
  std::vector<Point> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(c + shift);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<Point>> canonical_candidates(const TilingSpec& spec,
                                                     std::span<const Point> cells,
                                                     SymmetryMode mode) {
  std::vector<std::vector<Point>> out;
  for (std::size_t k : mode_orientations(spec, mode)) {
    std::vector<Point> image;
    image.reserve(cells.size());
    for (const auto& c : cells) image.push_back(spec.orientations[k].apply(c));
    out.push_back(normalize_translation(image));
  }
  return out;
}

CanonicalForm canonical_form(const TilingSpec& spec, std::span<const Point> cells, SymmetryMode mode) {
  if (cells.empty()) throw Error("cannot canonicalize an empty cell set");
  for (const auto& c : cells)
    if (!is_cell(spec, c)) throw NotACell(c.str());
  auto candidates = canonical_candidates(spec, cells, mode);
  // Sequences have equal length, so std::vector's lexicographic order is
  // exactly the point-by-point comparison.
  auto best = std::min_element(candidates.begin(), candidates.end());
  return {std::move(*best), mode, spec.name};
}

std::string serialize_cells(std::span<const Point> cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ';';
    s += cells[i].str();
  }
  return s;
}

std::vector<Point> parse_cells(std::string_view text) {
  std::vector<Point> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t semi = text.find(';', start);
    std::string_view piece =
        text.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start);
    out.push_back(Point::parse(piece));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  if (!out.empty()) {
    for (const auto& p : out)
      if (p.dim() != out.front().dim()) throw ParseError("cells of mixed dimension in '" + std::string(text) + "'");
  }
  return out;
}

}  // namespace polyform
