#include <algorithm>
#include <set>
#include <unordered_map>

#include "placement_index.hpp"
#include "polyform/errors.hpp"
#include "polyform/lattice.hpp"
#include "polyform/packing.hpp"

namespace polyform {

std::string_view to_string(PlacementGroup group) {
  return group == PlacementGroup::Rotations ? "rotations" : "rotations-and-reflections";
}

PlacementGroup parse_placement_group(std::string_view text) {
  if (text == "rotations") return PlacementGroup::Rotations;
  if (text == "rotations-and-reflections") return PlacementGroup::RotationsAndReflections;
  throw Error("unknown placement group '" + std::string(text) + "' (rotations|rotations-and-reflections)");
}

SymmetryMode piece_mode(PlacementGroup group) {
  return group == PlacementGroup::Rotations ? SymmetryMode::OneSided : SymmetryMode::Free;
}

std::string_view to_string(Multiplicity m) { return m == Multiplicity::Once ? "once" : "unbounded"; }

Multiplicity parse_multiplicity(std::string_view text) {
  if (text == "once") return Multiplicity::Once;
  if (text == "unbounded") return Multiplicity::Unbounded;
  throw Error("unknown multiplicity '" + std::string(text) + "' (once|unbounded)");
}

std::size_t PieceSet::total_cells() const {
  std::size_t total = 0;
  for (const auto& p : pieces) total += p.form.size() * p.count;
  return total;
}

PieceSet make_piece_set(const TilingSpec& spec, std::span<const std::vector<Point>> pieces, PlacementGroup group,
                        Multiplicity multiplicity, std::span<const std::size_t> counts) {
  if (!counts.empty() && counts.size() != pieces.size()) throw Error("piece counts do not match the pieces");
  PieceSet set;
  set.multiplicity = multiplicity;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].empty()) throw Error("empty piece");
    CanonicalForm form = canonical_form(spec, pieces[i], piece_mode(group));
    if (!seen.insert(form.str()).second) throw Error("duplicate piece " + form.str());
    std::size_t count = counts.empty() ? 1 : counts[i];
    if (count == 0) throw Error("piece count must be positive");
    set.pieces.push_back({std::move(form), count});
  }
  return set;
}

namespace detail {

PlacementIndex::PlacementIndex(const TilingSpec& spec, const Region& region)
    : lattice(spec), dim(spec.dim) {
  scaled.resize(region.size() * dim);
  for (std::size_t c = 0; c < region.size(); ++c) {
    lattice.to_scaled(region.cells[c], &scaled[c * dim]);
    index.emplace(key(&scaled[c * dim]), c);
  }
}

long PlacementIndex::find(const Coord* cell) const {
  auto it = index.find(key(cell));
  return it == index.end() ? -1 : static_cast<long>(it->second);
}

std::vector<std::vector<std::size_t>> PlacementIndex::images(std::span<const Point> cells, PlacementGroup group,
                                                             std::vector<std::size_t>* orientations,
                                                             std::vector<Point>* shifts) const {
  const TilingSpec& spec = lattice.spec();
  const Coord D = lattice.scale();
  std::vector<Coord> piece(cells.size() * dim), image(piece.size()), moved(piece.size());
  for (std::size_t c = 0; c < cells.size(); ++c) lattice.to_scaled(cells[c], &piece[c * dim]);

  std::set<std::vector<std::size_t>> seen;
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k : mode_orientations(spec, piece_mode(group))) {
    const auto& L = lattice.linear(k);
    const auto& off = lattice.offset(k);
    for (std::size_t c = 0; c < cells.size(); ++c)
      for (std::size_t i = 0; i < dim; ++i) {
        std::int64_t v = off[i];
        for (std::size_t j = 0; j < dim; ++j) v += std::int64_t{L[i * dim + j]} * piece[c * dim + j];
        image[c * dim + i] = static_cast<Coord>(v);
      }
    // Anchor the image's first cell on every region cell.
    for (std::size_t r = 0; r < scaled.size() / dim; ++r) {
      bool integral = true;
      std::vector<Coord> t(dim);
      for (std::size_t i = 0; i < dim && integral; ++i) {
        t[i] = scaled[r * dim + i] - image[i];
        integral = t[i] % D == 0;
      }
      if (!integral) continue;
      std::vector<std::size_t> covered;
      bool inside = true;
      for (std::size_t c = 0; c < cells.size() && inside; ++c) {
        for (std::size_t i = 0; i < dim; ++i) moved[c * dim + i] = image[c * dim + i] + t[i];
        long idx = find(&moved[c * dim]);
        inside = idx >= 0;
        if (inside) covered.push_back(static_cast<std::size_t>(idx));
      }
      if (!inside) continue;
      std::sort(covered.begin(), covered.end());
      if (!seen.insert(covered).second) continue;
      out.push_back(std::move(covered));
      if (orientations) orientations->push_back(k);
      if (shifts) {
        Point shift(dim);
        for (std::size_t i = 0; i < dim; ++i) shift[i] = Rat(t[i] / D);
        shifts->push_back(std::move(shift));
      }
    }
  }
  return out;
}

}  // namespace detail

std::vector<Placement> placements(const TilingSpec& spec, const Region& region, const CanonicalForm& piece,
                                  PlacementGroup group, std::size_t piece_index) {
  detail::PlacementIndex index(spec, region);
  std::vector<std::size_t> orientations;
  std::vector<Point> shifts;
  auto covers = index.images(piece.cells, group, &orientations, &shifts);
  std::vector<Placement> out;
  out.reserve(covers.size());
  for (std::size_t i = 0; i < covers.size(); ++i) {
    Placement p;
    p.piece = piece_index;
    p.orientation = orientations[i];
    p.shift = shifts[i];
    for (std::size_t c : covers[i]) p.cells.push_back(region.cells[c]);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<AffineMap> region_symmetries(const TilingSpec& spec, const Region& region, PlacementGroup group) {
  std::vector<AffineMap> out;
  if (region.cells.empty()) return out;
  for (std::size_t k : mode_orientations(spec, piece_mode(group))) {
    const AffineMap& g = spec.orientations[k];
    std::vector<Point> image;
    image.reserve(region.size());
    for (const auto& c : region.cells) image.push_back(g.apply(c));
    std::sort(image.begin(), image.end());
    Point t = region.cells.front() - image.front();
    if (!t.is_integral()) continue;
    bool same = true;
    for (std::size_t i = 0; i < image.size() && same; ++i) same = image[i] + t == region.cells[i];
    if (same) out.push_back(affine_compose(AffineMap::translation(t), g));
  }
  return out;
}

}  // namespace polyform
