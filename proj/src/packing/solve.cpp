#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "exact_cover.hpp"
#include "placement_index.hpp"
#include "polyform/errors.hpp"
#include "polyform/packing.hpp"

namespace polyform {
namespace {

using SolutionKey = std::vector<std::pair<std::size_t, std::vector<std::size_t>>>;

// Region index permutation induced by each region symmetry.
std::vector<std::vector<std::size_t>> symmetry_permutations(const TilingSpec& spec, const Region& region,
                                                            const std::vector<AffineMap>& symmetries) {
  std::map<Point, std::size_t> where;
  for (std::size_t i = 0; i < region.size(); ++i) where.emplace(region.cells[i], i);
  std::vector<std::vector<std::size_t>> perms;
  for (const auto& g : symmetries) {
    std::vector<std::size_t> perm(region.size());
    for (std::size_t i = 0; i < region.size(); ++i) perm[i] = where.at(g.apply(region.cells[i]));
    perms.push_back(std::move(perm));
  }
  (void)spec;
  return perms;
}

SolutionKey orbit_key(const std::vector<std::vector<std::size_t>>& perms, const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& piece_of, const std::vector<std::vector<std::size_t>>& covers) {
  SolutionKey best;
  for (const auto& perm : perms) {
    SolutionKey key;
    for (std::size_t r : rows) {
      std::vector<std::size_t> cells;
      for (std::size_t c : covers[r]) cells.push_back(perm[c]);
      std::sort(cells.begin(), cells.end());
      key.emplace_back(piece_of[r], std::move(cells));
    }
    std::sort(key.begin(), key.end());
    if (best.empty() || key < best) best = std::move(key);
  }
  return best;
}

}  // namespace

PackResult solve_pack(const TilingSpec& spec, const Region& region, const PieceSet& pieces, PlacementGroup group,
                      const PackOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  PackResult result;
  if (pieces.multiplicity == Multiplicity::Once && pieces.total_cells() != region.size()) {
    result.infeasible = true;
    result.stop_reason = "piece cells (" + std::to_string(pieces.total_cells()) + ") differ from region cells (" +
                         std::to_string(region.size()) + ")";
    if (options.modulo_region_symmetry) result.modulo_symmetry = 0;
    return result;
  }

  detail::PlacementIndex index(spec, region);
  std::vector<std::vector<std::size_t>> covers;
  std::vector<std::size_t> piece_of;
  for (std::size_t p = 0; p < pieces.pieces.size(); ++p) {
    std::vector<std::size_t> orientations;
    std::vector<Point> shifts;
    auto images = index.images(pieces.pieces[p].form.cells, group, &orientations, &shifts);
    for (std::size_t i = 0; i < images.size(); ++i) {
      Placement pl;
      pl.piece = p;
      pl.orientation = orientations[i];
      pl.shift = shifts[i];
      for (std::size_t c : images[i]) pl.cells.push_back(region.cells[c]);
      result.placements.push_back(std::move(pl));
      covers.push_back(std::move(images[i]));
      piece_of.push_back(p);
    }
  }

  std::vector<std::size_t> order(covers.size());
  std::iota(order.begin(), order.end(), 0);
  if (options.shuffle_seed) std::shuffle(order.begin(), order.end(), std::mt19937_64(options.shuffle_seed));

  std::vector<std::size_t> counts;
  if (pieces.multiplicity == Multiplicity::Once)
    for (const auto& p : pieces.pieces) counts.push_back(p.count);
  detail::ExactCover dlx(region.size(), counts);
  for (std::size_t r : order) {
    std::vector<std::size_t> cols = covers[r];
    if (pieces.multiplicity == Multiplicity::Once) cols.push_back(region.size() + piece_of[r]);
    dlx.add_row(cols);
  }

  std::vector<std::vector<std::size_t>> perms;
  if (options.modulo_region_symmetry) {
    auto symmetries = region_symmetries(spec, region, group);
    result.region_symmetry_count = symmetries.size();
    perms = symmetry_permutations(spec, region, symmetries);
  }
  std::set<SolutionKey> orbits;

  detail::ExactCover::Limits limits;
  limits.solutions = options.limit;
  if (options.time_limit_seconds)
    limits.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(*options.time_limit_seconds));
  auto stop = dlx.search(limits, [&](const std::vector<std::size_t>& chosen) {
    ++result.raw_count;
    std::vector<std::size_t> rows;
    for (std::size_t r : chosen) rows.push_back(order[r]);
    std::sort(rows.begin(), rows.end());
    if (options.modulo_region_symmetry) orbits.insert(orbit_key(perms, rows, piece_of, covers));
    if (options.keep_solutions) result.solutions.push_back({std::move(rows)});
  });

  result.nodes = dlx.nodes();
  switch (stop) {
    case detail::ExactCover::Stop::Exhausted: break;
    case detail::ExactCover::Stop::SolutionLimit:
      result.complete = false;
      result.stop_reason = "solution limit reached";
      break;
    case detail::ExactCover::Stop::Deadline:
      result.complete = false;
      result.stop_reason = "time limit reached";
      break;
  }
  if (options.modulo_region_symmetry) result.modulo_symmetry = orbits.size();
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

VerifyReport verify_solution(const TilingSpec& spec, const Region& region, const PieceSet& pieces,
                             PlacementGroup group, std::span<const Placement> solution) {
  VerifyReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.problems.push_back(std::move(msg));
  };

  std::map<Point, std::size_t> hits;
  std::vector<std::size_t> used(pieces.pieces.size(), 0);
  for (std::size_t i = 0; i < solution.size(); ++i) {
    const Placement& pl = solution[i];
    if (pl.piece >= pieces.pieces.size()) {
      fail("placement " + std::to_string(i) + " names piece " + std::to_string(pl.piece) + " which does not exist");
      continue;
    }
    ++used[pl.piece];
    for (const auto& c : pl.cells) ++hits[c];
    CanonicalForm form = canonical_form(spec, pl.cells, piece_mode(group));
    if (form.cells != pieces.pieces[pl.piece].form.cells)
      fail("placement " + std::to_string(i) + " is " + form.str() + ", not piece " + std::to_string(pl.piece) + " (" +
           pieces.pieces[pl.piece].form.str() + ")");
  }
  for (const auto& [cell, n] : hits) {
    if (!std::binary_search(region.cells.begin(), region.cells.end(), cell)) fail("cell " + cell.str() + " lies outside the region");
    if (n > 1) fail("cell " + cell.str() + " is covered " + std::to_string(n) + " times");
  }
  for (const auto& cell : region.cells)
    if (!hits.count(cell)) fail("cell " + cell.str() + " is not covered");
  if (pieces.multiplicity == Multiplicity::Once)
    for (std::size_t p = 0; p < used.size(); ++p)
      if (used[p] != pieces.pieces[p].count)
        fail("piece " + std::to_string(p) + " used " + std::to_string(used[p]) + " times, expected " +
             std::to_string(pieces.pieces[p].count));
  return report;
}

}  // namespace polyform
