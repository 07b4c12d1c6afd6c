// Count oracle working on exact rational points only.

#include <map>
#include <unordered_map>
#include <unordered_set>

#include "polyform/enumerate.hpp"
#include "polyform/errors.hpp"

namespace polyform {
namespace {

using CellSet = std::vector<Point>;  // sorted

struct CellSetHash {
  std::size_t operator()(const CellSet& s) const noexcept {
    std::size_t h = s.size();
    for (const auto& p : s) h = h * 0x100000001b3ULL ^ p.hash();
    return h;
  }
};
using CellSets = std::unordered_set<CellSet, CellSetHash>;

struct Graph {
  const TilingSpec& spec;
  std::unordered_map<Point, std::vector<Point>, PointHash> adjacency;
  std::unordered_map<Point, std::size_t, PointHash> orbit;

  const std::vector<Point>& neighbors_of(const Point& p) {
    auto it = adjacency.find(p);
    if (it == adjacency.end()) it = adjacency.emplace(p, neighbors(spec, p)).first;
    return it->second;
  }
  std::size_t orbit_of(const Point& p) {
    auto it = orbit.find(p);
    if (it == orbit.end()) it = orbit.emplace(p, classify(spec, p).front().orbit).first;
    return it->second;
  }
};

using Signature = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;

Signature signature(Graph& g, const CellSet& s) {
  Signature sig;
  for (const auto& p : s) {
    sig.first.push_back(g.orbit_of(p));
    std::size_t deg = 0;
    for (const auto& q : g.neighbors_of(p))
      if (std::binary_search(s.begin(), s.end(), q)) ++deg;
    sig.second.push_back(deg);
  }
  std::sort(sig.first.begin(), sig.first.end());
  std::sort(sig.second.begin(), sig.second.end());
  return sig;
}

// Sorted images of a set under each map.
std::vector<CellSet> images(const CellSet& a, const std::vector<AffineMap>& maps) {
  std::vector<CellSet> out;
  out.reserve(maps.size());
  for (const auto& m : maps) {
    CellSet image;
    image.reserve(a.size());
    for (const auto& p : a) image.push_back(m.apply(p));
    std::sort(image.begin(), image.end());
    out.push_back(std::move(image));
  }
  return out;
}

// True if an integer translation carries some image onto b. Translation
// preserves the lexicographic order, so it must align the first points.
bool equivalent(const std::vector<CellSet>& imgs, const CellSet& b) {
  for (const auto& image : imgs) {
    Point t = b.front() - image.front();
    if (!t.is_integral()) continue;
    bool same = true;
    for (std::size_t i = 1; i < image.size() && same; ++i) same = image[i] + t == b[i];
    if (same) return true;
  }
  return false;
}

}  // namespace

std::vector<std::uint64_t> brute_oracle(const TilingSpec& spec, SymmetryMode mode, std::size_t n_max,
                                        std::optional<int> patch_radius) {
  std::vector<std::uint64_t> counts;
  if (n_max == 0) return counts;
  Graph g{spec, {}, {}};
  std::vector<AffineMap> maps;
  for (std::size_t k : mode_orientations(spec, mode)) maps.push_back(spec.orientations[k]);
  const std::vector<Point> anchors = fundamental_cells(spec);

  // Graph distance from the anchors, limited to the patch.
  const int radius = patch_radius.value_or(static_cast<int>(n_max) - 1);
  std::unordered_map<Point, int, PointHash> dist;
  std::vector<Point> frontier = anchors;
  for (const auto& a : anchors) dist.emplace(a, 0);
  for (int r = 1; r <= radius; ++r) {
    std::vector<Point> next;
    for (const auto& p : frontier)
      for (const auto& q : g.neighbors_of(p))
        if (dist.emplace(q, r).second) next.push_back(q);
    frontier.swap(next);
  }

  // Every class has a translate whose least cell lies in [0,1)^d, which is
  // an anchor, so only sets whose minimum is an anchor are grown.
  CellSets level;
  for (const auto& a : anchors) level.insert(CellSet{a});
  for (std::size_t n = 1;; ++n) {
    std::map<Signature, std::vector<CellSet>> classes;
    std::uint64_t count = 0;
    for (const auto& s : level) {
      auto& bucket = classes[signature(g, s)];
      bool seen = false;
      std::vector<CellSet> imgs;
      if (!bucket.empty()) imgs = images(s, maps);
      for (const auto& rep : bucket)
        if (equivalent(imgs, rep)) {
          seen = true;
          break;
        }
      if (!seen) {
        bucket.push_back(s);
        ++count;
      }
    }
    counts.push_back(count);
    if (n == n_max) break;

    CellSets grown;
    for (const auto& s : level) {
      for (const auto& p : s) {
        for (const auto& q : g.neighbors_of(p)) {
          if (q < s.front() || std::binary_search(s.begin(), s.end(), q)) continue;
          if (!dist.count(q)) throw Error("patch too small for size " + std::to_string(n + 1));
          CellSet t = s;
          t.insert(std::upper_bound(t.begin(), t.end(), q), q);
          grown.insert(std::move(t));
        }
      }
    }
    level.swap(grown);
  }
  return counts;
}

}  // namespace polyform
