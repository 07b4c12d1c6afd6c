#include <algorithm>
#include <array>
#include <chrono>
#include <map>
#include <set>

#include "doctest.h"
#include "polyform/errors.hpp"
#include "polyform/packing.hpp"

using namespace polyform;

namespace {

using Cell = std::array<int, 2>;
using Shape = std::vector<Cell>;

Shape normalized(Shape s) {
  int mx = s[0][0], my = s[0][1];
  for (auto& c : s) {
    mx = std::min(mx, c[0]);
    my = std::min(my, c[1]);
  }
  for (auto& c : s) c = {c[0] - mx, c[1] - my};
  std::sort(s.begin(), s.end());
  return s;
}

// The eight dihedral images of a square-grid shape, or the four rotations.
std::vector<Shape> grid_images(const Shape& s, bool reflections) {
  std::set<Shape> out;
  Shape cur = s;
  for (int flip = 0; flip < (reflections ? 2 : 1); ++flip) {
    for (int r = 0; r < 4; ++r) {
      out.insert(normalized(cur));
      for (auto& c : cur) c = {-c[1], c[0]};
    }
    for (auto& c : cur) c = {-c[0], c[1]};
  }
  return {out.begin(), out.end()};
}

// Naive first-empty-cell backtracker on a W x H board. counts[i] < 0 means
// unlimited copies of piece i.
struct NaiveTiler {
  int w, h;
  std::vector<std::vector<Shape>> images;
  std::vector<int> left;
  std::vector<char> board;
  std::uint64_t found = 0;

  NaiveTiler(int w_, int h_, const std::vector<Shape>& pieces, std::vector<int> counts, bool reflections)
      : w(w_), h(h_), left(std::move(counts)), board(static_cast<std::size_t>(w_ * h_), 0) {
    for (const auto& p : pieces) images.push_back(grid_images(p, reflections));
  }

  bool fits(const Shape& s, int dx, int dy) const {
    for (auto c : s) {
      int x = c[0] + dx, y = c[1] + dy;
      if (x < 0 || y < 0 || x >= w || y >= h || board[static_cast<std::size_t>(y * w + x)]) return false;
    }
    return true;
  }
  void mark(const Shape& s, int dx, int dy, char v) {
    for (auto c : s) board[static_cast<std::size_t>((c[1] + dy) * w + c[0] + dx)] = v;
  }

  void go() {
    auto it = std::find(board.begin(), board.end(), 0);
    if (it == board.end()) {
      ++found;
      return;
    }
    int idx = static_cast<int>(it - board.begin());
    int ex = idx % w, ey = idx / w;
    for (std::size_t p = 0; p < images.size(); ++p) {
      if (left[p] == 0) continue;
      for (const auto& s : images[p]) {
        // The first empty cell in row-major order must be the shape's
        // first cell in the same order.
        Cell first = *std::min_element(s.begin(), s.end(), [](Cell a, Cell b) {
          return std::make_pair(a[1], a[0]) < std::make_pair(b[1], b[0]);
        });
        int dx = ex - first[0], dy = ey - first[1];
        if (!fits(s, dx, dy)) continue;
        mark(s, dx, dy, 1);
        --left[p];
        go();
        ++left[p];
        mark(s, dx, dy, 0);
      }
    }
  }
};

const std::vector<Shape> kPentominoes = {
    {{1, 0}, {2, 0}, {0, 1}, {1, 1}, {1, 2}}, {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}},
    {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 3}}, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {1, 3}},
    {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 2}}, {{0, 0}, {1, 0}, {2, 0}, {1, 1}, {1, 2}},
    {{0, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}}, {{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}},
    {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}}, {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}},
    {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}}, {{0, 0}, {1, 0}, {1, 1}, {1, 2}, {2, 2}},
};

std::vector<Point> to_points(const Shape& s) {
  std::vector<Point> out;
  for (auto c : s) out.push_back(Point{Rat(c[0]), Rat(c[1])});
  return out;
}

std::vector<std::vector<Point>> to_point_sets(const std::vector<Shape>& shapes) {
  std::vector<std::vector<Point>> out;
  for (const auto& s : shapes) out.push_back(to_points(s));
  return out;
}

Region rect(const TilingSpec& spec, long w, long h) {
  std::array<long, 2> p{w, h};
  return generate_region(spec, "rect", p);
}

std::string data_path(const std::string& rel) { return std::string(POLYFORM_TEST_DATA_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("placement group and multiplicity names") {
  CHECK(parse_placement_group("rotations") == PlacementGroup::Rotations);
  CHECK(parse_placement_group("rotations-and-reflections") == PlacementGroup::RotationsAndReflections);
  CHECK(to_string(PlacementGroup::RotationsAndReflections) == "rotations-and-reflections");
  CHECK_THROWS_AS(parse_placement_group("mirror"), Error);
  CHECK(piece_mode(PlacementGroup::Rotations) == SymmetryMode::OneSided);
  CHECK(piece_mode(PlacementGroup::RotationsAndReflections) == SymmetryMode::Free);
  CHECK(parse_multiplicity("unbounded") == Multiplicity::Unbounded);
  CHECK(to_string(Multiplicity::Once) == "once");
  CHECK_THROWS_AS(parse_multiplicity("twice"), Error);
}

TEST_CASE("region generation") {
  auto square = load_tiling("square");
  CHECK(rect(square, 3, 20).size() == 60);
  CHECK(rect(square, 1, 1).size() == 1);

  auto bcc = load_tiling("truncated-octahedral");
  std::array<long, 3> p{3, 5, 8};
  CHECK(generate_region(bcc, "bcc-box", p).size() == 3 * 5 * 8 + 2 * 4 * 7);

  auto cubic = load_tiling("cubic");
  std::array<long, 3> q{2, 3, 4};
  CHECK(generate_region(cubic, "box", q).size() == 24);

  auto tetoct = load_tiling("tet-oct");
  for (long s = 1; s <= 6; ++s) {
    std::array<long, 1> ps{s};
    // (s-1)s(s+1)/6 octahedra and s(s+1)(s+2)/6 tetrahedra.
    CHECK(generate_region(tetoct, "tet-region", ps).size() ==
          static_cast<std::size_t>((s - 1) * s * (s + 1) / 6 + s * (s + 1) * (s + 2) / 6));
  }

  SUBCASE("errors") {
    std::array<long, 1> one{3};
    std::array<long, 2> neg{3, 0};
    CHECK_THROWS_AS(generate_region(square, "rect", one), Error);
    CHECK_THROWS_AS(generate_region(square, "rect", neg), Error);
    CHECK_THROWS_AS(generate_region(square, "hexagon", neg), Error);
    CHECK_THROWS_AS(generate_region(square, "box", q), Error);
    std::array<long, 2> ok{2, 2};
    std::vector<Point> outside{Point{Rat(5), Rat(5)}};
    CHECK_THROWS_AS(generate_region(square, "rect", ok, outside), Error);
  }

  SUBCASE("exclude") {
    std::array<long, 2> ok{2, 2};
    std::vector<Point> corner{Point{Rat(0), Rat(0)}};
    auto r = generate_region(square, "rect", ok, corner);
    CHECK(r.size() == 3);
    CHECK(std::find(r.cells.begin(), r.cells.end(), corner[0]) == r.cells.end());
  }

  SUBCASE("explicit") {
    std::vector<Point> cells{Point{Rat(1), Rat(0)}, Point{Rat(0), Rat(0)}};
    auto r = explicit_region(square, cells);
    CHECK(r.size() == 2);
    CHECK(std::is_sorted(r.cells.begin(), r.cells.end()));
    cells.push_back(cells.back());
    CHECK_THROWS_AS(explicit_region(square, cells), Error);
    std::vector<Point> bad{Point{Rat(1, 2), Rat(0)}};
    CHECK_THROWS_AS(explicit_region(square, bad), Error);
  }
}

TEST_CASE("placement counts") {
  auto square = load_tiling("square");
  auto region = rect(square, 3, 20);
  auto mono = canonical_form(square, to_points({{0, 0}}), SymmetryMode::Free);
  auto ipent = canonical_form(square, to_points(kPentominoes[1]), SymmetryMode::Free);
  auto xpent = canonical_form(square, to_points(kPentominoes[9]), SymmetryMode::Free);
  CHECK(placements(square, region, mono, PlacementGroup::RotationsAndReflections).size() == 60);
  CHECK(placements(square, region, ipent, PlacementGroup::RotationsAndReflections).size() == 48);
  CHECK(placements(square, region, xpent, PlacementGroup::RotationsAndReflections).size() == 18);
  CHECK(placements(square, rect(square, 2, 2), ipent, PlacementGroup::Rotations).empty());

  for (const auto& pl : placements(square, region, ipent, PlacementGroup::Rotations, 7)) {
    CHECK(pl.piece == 7);
    CHECK(pl.cells.size() == 5);
    CHECK(std::is_sorted(pl.cells.begin(), pl.cells.end()));
    for (const auto& c : pl.cells) CHECK(std::binary_search(region.cells.begin(), region.cells.end(), c));
  }
}

TEST_CASE("region symmetries") {
  auto square = load_tiling("square");
  CHECK(region_symmetries(square, rect(square, 3, 20), PlacementGroup::RotationsAndReflections).size() == 4);
  CHECK(region_symmetries(square, rect(square, 3, 20), PlacementGroup::Rotations).size() == 2);
  CHECK(region_symmetries(square, rect(square, 4, 4), PlacementGroup::RotationsAndReflections).size() == 8);
  CHECK(region_symmetries(square, rect(square, 4, 4), PlacementGroup::Rotations).size() == 4);
  auto cubic = load_tiling("cubic");
  std::array<long, 3> c{3, 3, 3};
  CHECK(region_symmetries(cubic, generate_region(cubic, "box", c), PlacementGroup::Rotations).size() == 24);
}

TEST_CASE("pentominoes in 3x20 agree with a naive tiler") {
  auto square = load_tiling("square");
  // A 3-wide board keeps the first-empty-cell scan tight.
  NaiveTiler naive(3, 20, kPentominoes, std::vector<int>(12, 1), true);
  naive.go();
  CHECK(naive.found == 8);

  auto pieces = make_piece_set(square, to_point_sets(kPentominoes), PlacementGroup::RotationsAndReflections);
  PackOptions opts;
  opts.modulo_region_symmetry = true;
  opts.keep_solutions = true;
  auto t0 = std::chrono::steady_clock::now();
  auto r = solve_pack(square, rect(square, 3, 20), pieces, PlacementGroup::RotationsAndReflections, opts);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(60));
  CHECK(r.complete);
  CHECK_FALSE(r.infeasible);
  CHECK(r.raw_count == naive.found);
  CHECK(r.modulo_symmetry == 2);
  CHECK(r.region_symmetry_count == 4);
  REQUIRE(r.solutions.size() == 8);
  for (const auto& sol : r.solutions) {
    std::vector<Placement> used;
    for (auto i : sol.placements) used.push_back(r.placements[i]);
    auto rep = verify_solution(square, rect(square, 3, 20), pieces, PlacementGroup::RotationsAndReflections, used);
    CHECK(rep.ok);
  }
}

TEST_CASE("solution count does not depend on placement order") {
  auto square = load_tiling("square");
  auto pieces = make_piece_set(square, to_point_sets(kPentominoes), PlacementGroup::RotationsAndReflections);
  for (std::uint64_t seed : {1u, 7u, 12345u}) {
    PackOptions opts;
    opts.shuffle_seed = seed;
    opts.modulo_region_symmetry = true;
    auto r = solve_pack(square, rect(square, 3, 20), pieces, PlacementGroup::RotationsAndReflections, opts);
    CHECK(r.raw_count == 8);
    CHECK(r.modulo_symmetry == 2);
  }
}

TEST_CASE("cell-count mismatch is infeasible") {
  auto square = load_tiling("square");
  auto pieces = make_piece_set(square, to_point_sets({kPentominoes[1]}), PlacementGroup::Rotations);
  auto r = solve_pack(square, rect(square, 2, 2), pieces, PlacementGroup::Rotations);
  CHECK(r.infeasible);
  CHECK(r.raw_count == 0);
  CHECK(r.complete);
}

TEST_CASE("piece counts and unbounded multiplicity match a naive tiler") {
  auto square = load_tiling("square");
  const std::vector<Shape> shapes = {{{0, 0}, {1, 0}}, {{0, 0}}};

  SUBCASE("two dominoes and two monominoes") {
    std::array<std::size_t, 2> counts{2, 2};
    auto pieces =
        make_piece_set(square, to_point_sets(shapes), PlacementGroup::Rotations, Multiplicity::Once, counts);
    CHECK(pieces.total_cells() == 6);
    for (auto [w, h] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{6, 1}}) {
      NaiveTiler naive(w, h, shapes, {2, 2}, false);
      naive.go();
      auto r = solve_pack(square, rect(square, w, h), pieces, PlacementGroup::Rotations);
      CHECK(r.raw_count == naive.found);
    }
  }

  SUBCASE("unbounded dominoes") {
    auto pieces = make_piece_set(square, to_point_sets({shapes[0]}), PlacementGroup::Rotations,
                                 Multiplicity::Unbounded);
    for (int w = 1; w <= 6; ++w) {
      NaiveTiler naive(w, 2, {shapes[0]}, {-1}, false);
      naive.go();
      auto r = solve_pack(square, rect(square, w, 2), pieces, PlacementGroup::Rotations);
      CHECK(r.raw_count == naive.found);
    }
    auto r = solve_pack(square, rect(square, 4, 2), pieces, PlacementGroup::Rotations);
    CHECK(r.raw_count == 5);
  }

  SUBCASE("unbounded mixes") {
    auto pieces = make_piece_set(square, to_point_sets({kPentominoes[4], kPentominoes[1], shapes[1]}),
                                 PlacementGroup::RotationsAndReflections, Multiplicity::Unbounded);
    NaiveTiler naive(5, 3, {kPentominoes[4], kPentominoes[1], shapes[1]}, {-1, -1, -1}, true);
    naive.go();
    auto r = solve_pack(square, rect(square, 5, 3), pieces, PlacementGroup::RotationsAndReflections);
    CHECK(r.raw_count == naive.found);
  }

  SUBCASE("duplicate pieces rejected") {
    auto twice = to_point_sets({kPentominoes[1], {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}});
    CHECK_THROWS_AS(make_piece_set(square, twice, PlacementGroup::Rotations), Error);
  }
}

TEST_CASE("limits stop the search") {
  auto square = load_tiling("square");
  auto pieces = make_piece_set(square, to_point_sets(kPentominoes), PlacementGroup::RotationsAndReflections);
  PackOptions opts;
  opts.limit = 3;
  auto r = solve_pack(square, rect(square, 3, 20), pieces, PlacementGroup::RotationsAndReflections, opts);
  CHECK(r.raw_count == 3);
  CHECK_FALSE(r.complete);
  CHECK_FALSE(r.stop_reason.empty());
}

TEST_CASE("verification catches broken solutions") {
  auto square = load_tiling("square");
  auto region = rect(square, 3, 20);
  auto pieces = make_piece_set(square, to_point_sets(kPentominoes), PlacementGroup::RotationsAndReflections);
  PackOptions opts;
  opts.limit = 1;
  opts.keep_solutions = true;
  auto r = solve_pack(square, region, pieces, PlacementGroup::RotationsAndReflections, opts);
  REQUIRE(r.solutions.size() == 1);
  std::vector<Placement> sol;
  for (auto i : r.solutions[0].placements) sol.push_back(r.placements[i]);
  CHECK(verify_solution(square, region, pieces, PlacementGroup::RotationsAndReflections, sol).ok);

  SUBCASE("missing placement") {
    auto broken = sol;
    broken.pop_back();
    CHECK_FALSE(verify_solution(square, region, pieces, PlacementGroup::RotationsAndReflections, broken).ok);
  }
  SUBCASE("piece used twice") {
    auto broken = sol;
    broken[1].piece = broken[0].piece;
    auto rep = verify_solution(square, region, pieces, PlacementGroup::RotationsAndReflections, broken);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.problems.empty());
  }
  SUBCASE("cell moved outside") {
    auto broken = sol;
    broken[0].cells[0] = Point{Rat(-1), Rat(-1)};
    CHECK_FALSE(verify_solution(square, region, pieces, PlacementGroup::RotationsAndReflections, broken).ok);
  }
  SUBCASE("mirror image under rotations only") {
    // The F pentomino is chiral; its mirror is not a placement of the
    // one-sided piece.
    auto f = to_points(kPentominoes[0]);
    auto one_sided = make_piece_set(square, std::vector<std::vector<Point>>{f}, PlacementGroup::Rotations,
                                    Multiplicity::Unbounded);
    Shape mirrored;
    for (auto c : kPentominoes[0]) mirrored.push_back({-c[0] + 2, c[1]});
    Placement pl;
    pl.cells = to_points(normalized(mirrored));
    std::sort(pl.cells.begin(), pl.cells.end());
    auto small = explicit_region(square, pl.cells);
    CHECK_FALSE(verify_solution(square, small, one_sided, PlacementGroup::Rotations, std::vector{pl}).ok);
  }
}

TEST_CASE("shipped instances") {
  auto pent = load_instance(data_path("instances/pentomino-3x20.json"));
  CHECK(pent.region.size() == 60);
  CHECK(pent.pieces.pieces.size() == 12);
  CHECK(pent.group == PlacementGroup::RotationsAndReflections);

  auto splatt = load_instance(data_path("instances/splatt-3x5x8.json"));
  CHECK(splatt.region.size() == 176);
  CHECK(splatt.pieces.pieces.size() == 44);
  CHECK(splatt.pieces.total_cells() == 176);
  CHECK(splatt.group == PlacementGroup::Rotations);

  auto kepert = load_instance(data_path("instances/kepert-tet5.json"));
  CHECK(kepert.region.size() == 44);
  CHECK(kepert.pieces.pieces.size() == 11);
  CHECK(kepert.pieces.total_cells() == 44);

  auto hexa = load_instance(data_path("instances/hexacube-10.json"));
  CHECK(hexa.region.size() == 1000);
  CHECK(hexa.pieces.pieces.size() == 167);
  CHECK(hexa.pieces.total_cells() == 1000);

  SUBCASE("kepert region keeps its tetrahedral symmetry") {
    CHECK(region_symmetries(kepert.spec, kepert.region, PlacementGroup::Rotations).size() == 12);
  }

  SUBCASE("splatt search under a time limit stays consistent") {
    PackOptions opts;
    opts.limit = 1;
    opts.time_limit_seconds = 2.0;
    opts.keep_solutions = true;
    auto r = solve_pack(splatt.spec, splatt.region, splatt.pieces, splatt.group, opts);
    CHECK_FALSE(r.infeasible);
    CHECK_FALSE(r.complete);
    for (const auto& sol : r.solutions) {
      std::vector<Placement> used;
      for (auto i : sol.placements) used.push_back(r.placements[i]);
      CHECK(verify_solution(splatt.spec, splatt.region, splatt.pieces, splatt.group, used).ok);
    }
  }
}

TEST_CASE("instance parse errors") {
  const char* good = R"({"name":"t","tiling":"square","region":{"kind":"rect","size":[1,2]},
    "pieces":[{"forms":["0,0;1,0"]}],"placement_group":"rotations","multiplicity":"once"})";
  auto inst = parse_instance(good);
  CHECK(inst.region.size() == 2);

  auto fails = [](const std::string& text) {
    try {
      parse_instance(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK_FALSE(fails(R"({"name":"t"})").empty());
  CHECK_FALSE(fails("{not json").empty());
  CHECK(fails(R"({"name":"t","tiling":"square","region":{"kind":"rect","size":[1,2]},
    "pieces":[{"forms":["0,0;1,0"]}],"placement_group":"sideways"})")
            .find("placement_group") != std::string::npos);
  CHECK(fails(R"({"name":"t","tiling":"square","region":{"kind":"rect","size":[1,2],"colour":1},
    "pieces":[{"forms":["0,0;1,0"]}],"placement_group":"rotations"})")
            .find("/region") != std::string::npos);
  CHECK_FALSE(fails(R"({"name":"t","tiling":"square","region":{"kind":"rect","size":[1,2]},
    "pieces":[{"file":"no/such/file.txt","n":2,"mode":"free"}],"placement_group":"rotations"})")
                  .empty());
}
