#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "polyform/errors.hpp"
#include "polyform/tiling.hpp"

namespace polyform {

namespace {

// Failure lists are capped so a badly broken file still gives a short report.
constexpr std::size_t kMaxFailures = 20;

void fail(CheckResult& check, std::string what) {
  check.passed = false;
  if (check.failures.size() < kMaxFailures) check.failures.push_back(std::move(what));
}

CheckResult named(std::string_view name) {
  CheckResult c;
  c.name = std::string(name);
  return c;
}

std::optional<std::size_t> find_coset(const std::vector<AffineMap>& reps, const AffineMap& m) {
  for (std::size_t k = 0; k < reps.size(); ++k)
    if (reps[k].same_coset(m)) return k;
  return std::nullopt;
}

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const CheckResult* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
    for (const auto& f : c.failures) os << "  - " << f << '\n';
  }
  os << "patch cells: " << patch_size << '\n';
  os << (ok() ? "valid" : "invalid") << '\n';
  return os.str();
}

ValidationReport validate(const TilingSpec& spec, int radius) {
  if (radius < 1) throw Error("validation radius must be >= 1");
  ValidationReport report;
  const auto& orients = spec.orientations;

  CheckResult identity = named(checks::kIdentityFirst);
  if (orients.empty() || !orients.front().linear().is_identity() ||
      !orients.front().offset().is_integral())
    fail(identity, "orientations[0] is not the identity");

  CheckResult unimodular = named(checks::kUnimodular);
  for (std::size_t k = 0; k < orients.size(); ++k) {
    if (!orients[k].linear().is_integral())
      fail(unimodular, "orientation " + std::to_string(k) + " has a non-integer linear part");
    else if (!orients[k].preserves_lattice())
      fail(unimodular, "orientation " + std::to_string(k) + " has determinant " +
                           orients[k].linear().determinant().str());
  }

  CheckResult closure = named(checks::kClosure);
  for (std::size_t j = 0; j < orients.size(); ++j) {
    for (std::size_t k = 0; k < orients.size(); ++k) {
      if (!find_coset(orients, affine_compose(orients[j], orients[k])))
        fail(closure, "orientation " + std::to_string(j) + " o " + std::to_string(k) +
                          " has no representative");
    }
    if (!find_coset(orients, affine_inverse(orients[j])))
      fail(closure, "inverse of orientation " + std::to_string(j) + " has no representative");
    for (std::size_t k = j + 1; k < orients.size(); ++k)
      if (orients[j].same_coset(orients[k]))
        fail(closure, "orientations " + std::to_string(j) + " and " + std::to_string(k) +
                          " represent the same coset");
  }

  // Patch: breadth-first search out to `radius` from every representative.
  CheckResult totality = named(checks::kTotality);
  CheckResult symmetry = named(checks::kAdjacencySymmetry);
  CheckResult stabilizer = named(checks::kStabilizer);
  CheckResult minimality = named(checks::kRepresentative);

  std::map<Point, std::vector<Point>> nbr_cache;
  std::map<Point, std::vector<VertexClass>> class_cache;
  auto classes_of = [&](const Point& p) -> const std::vector<VertexClass>& {
    auto it = class_cache.find(p);
    if (it == class_cache.end()) it = class_cache.emplace(p, classify(spec, p)).first;
    return it->second;
  };
  auto nbrs_of = [&](const Point& p) -> const std::vector<Point>& {
    auto it = nbr_cache.find(p);
    if (it == nbr_cache.end()) {
      const auto& cls = classes_of(p);
      std::vector<Point> first = neighbors_via(spec, cls.front());
      for (std::size_t m = 1; m < cls.size(); ++m) {
        if (neighbors_via(spec, cls[m]) != first) {
          fail(stabilizer, "cell " + p.str() + ": witnesses (orbit " + std::to_string(cls[0].orbit) +
                               ", orientation " + std::to_string(cls[0].orientation) + ") and (orbit " +
                               std::to_string(cls[m].orbit) + ", orientation " +
                               std::to_string(cls[m].orientation) + ") give different neighbors");
          break;
        }
      }
      it = nbr_cache.emplace(p, std::move(first)).first;
    }
    return it->second;
  };

  std::map<Point, int> dist;
  std::vector<Point> frontier;
  for (const auto& o : spec.orbits) {
    if (dist.emplace(o.rep, 0).second) frontier.push_back(o.rep);
  }
  for (int d = 0; d < radius && !frontier.empty(); ++d) {
    std::vector<Point> next;
    for (const auto& p : frontier) {
      if (classes_of(p).empty()) continue;
      for (const auto& q : nbrs_of(p)) {
        if (dist.emplace(q, d + 1).second) next.push_back(q);
      }
    }
    frontier = std::move(next);
  }
  report.patch_size = dist.size();

  for (const auto& [p, d] : dist) {
    const auto& cls = classes_of(p);
    if (cls.empty()) {
      fail(totality, "point " + p.str() + " at distance " + std::to_string(d) + " is not a cell");
      continue;
    }
    if (d >= radius) continue;
    for (const auto& q : nbrs_of(p)) {
      if (classes_of(q).empty()) continue;  // reported by totality
      const auto& back = nbrs_of(q);
      if (!std::binary_search(back.begin(), back.end(), p))
        fail(symmetry, "edge " + p.str() + " -> " + q.str() + " has no reverse edge");
    }
  }

  for (std::size_t i = 0; i < spec.orbits.size(); ++i) {
    const Point& rep = spec.orbits[i].rep;
    for (const auto& vc : classes_of(rep)) {
      if (vc.orbit != i) {
        fail(minimality, "representative of orbit " + std::to_string(i) + " also lies in orbit " +
                             std::to_string(vc.orbit));
        break;
      }
    }
    for (const auto& x : rep) {
      if (x < Rat(0) || x >= Rat(1)) {
        fail(minimality, "representative of orbit " + std::to_string(i) + " is outside [0,1)^d");
        break;
      }
    }
    for (const auto& [p, d] : dist) {
      if (!(p < rep)) break;
      bool nonneg = std::all_of(p.begin(), p.end(), [](const Rat& x) { return x.sign() >= 0; });
      if (!nonneg) continue;
      for (const auto& vc : classes_of(p)) {
        if (vc.orbit == i) {
          fail(minimality, "orbit " + std::to_string(i) + ": " + p.str() +
                               " is lexicographically earlier than the representative " + rep.str());
          break;
        }
      }
    }
  }

  report.checks = {identity, unimodular, closure, totality, symmetry, stabilizer, minimality};
  return report;
}

}  // namespace polyform
