#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "polyform/enumerate.hpp"
#include "polyform/errors.hpp"

using namespace polyform;
namespace fs = std::filesystem;

namespace {

constexpr SymmetryMode kModes[] = {SymmetryMode::Free, SymmetryMode::OneSided, SymmetryMode::Fixed};

std::vector<std::uint64_t> counts_of(const EnumerationResult& r) {
  std::vector<std::uint64_t> out;
  for (const auto& c : r.counts) out.push_back(c.count);
  return out;
}

std::vector<std::uint64_t> run(const TilingSpec& spec, SymmetryMode mode, std::size_t n,
                               EnumerateOptions opts = {}) {
  return counts_of(enumerate_counts(spec, mode, n, opts));
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("polyform-test-" + tag + "-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Largest n used for the per-tiling property sweeps, keeping each one fast.
std::size_t sweep_limit(const std::string& name) {
  if (name == "rectified-cubic" || name == "truncated-octahedral") return 5;
  return 6;
}

}  // namespace

TEST_CASE("level one") {
  TilingSpec snub = load_tiling("snub-trihexagonal");
  Lattice lattice(snub);
  CHECK(initial_level(lattice, SymmetryMode::Free).count == 3);
  CHECK(initial_level(lattice, SymmetryMode::Fixed).count == 9);
  CHECK(initial_level(Lattice(load_tiling("tet-oct")), SymmetryMode::Free).count == 2);
}

TEST_CASE("level two on the snub trihexagonal tiling") {
  TilingSpec snub = load_tiling("snub-trihexagonal");
  Lattice lattice(snub);
  Level one = initial_level(lattice, SymmetryMode::Free);
  Level two = extend(lattice, one, SymmetryMode::Free);
  REQUIRE(two.count == 3);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < two.forms->size(); ++i)
    names.push_back(to_canonical_form(lattice, two.forms->form(i), SymmetryMode::Free).str());
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"0,0;8/21,2/21", "2/21,11/21;1/3,1/3", "8/21,23/21;13/21,19/21"});
  CHECK(extend(lattice, two, SymmetryMode::Free).count == 7);

  Lattice cubic(load_tiling("cubic"));
  CHECK(extend(cubic, initial_level(cubic, SymmetryMode::Free), SymmetryMode::Free).count == 1);
}

TEST_CASE("extend requires retained forms") {
  Lattice lattice(load_tiling("square"));
  Level bare;
  bare.n = 1;
  bare.count = 1;
  CHECK_THROWS_AS(extend(lattice, bare, SymmetryMode::Free), Error);
}

TEST_CASE("free counts for small n") {
  struct Row {
    const char* tiling;
    std::vector<std::uint64_t> counts;
  };
  const Row rows[] = {
      {"snub-trihexagonal", {3, 3, 7, 23, 69, 228}},
      {"cubic", {1, 1, 2, 7, 23, 112}},
      {"tet-oct", {2, 1, 4, 9, 44, 195}},
      {"rectified-cubic", {2, 2, 9, 40, 290}},
      {"truncated-octahedral", {1, 2, 6, 35, 251}},
      {"disphenoid", {1, 1, 2, 5, 14, 47}},
      {"square", {1, 1, 2, 5, 12, 35, 108}},
  };
  for (const auto& row : rows) {
    CAPTURE(row.tiling);
    CHECK(run(load_tiling(row.tiling), SymmetryMode::Free, row.counts.size()) == row.counts);
  }
}

TEST_CASE("one-sided checkpoints") {
  CHECK(run(load_tiling("cubic"), SymmetryMode::OneSided, 6).back() == 166);
  CHECK(run(load_tiling("truncated-octahedral"), SymmetryMode::OneSided, 4).back() == 44);
  CHECK(run(load_tiling("tet-oct"), SymmetryMode::OneSided, 4).back() == 11);
  CHECK(run(load_tiling("square"), SymmetryMode::Fixed, 5) == std::vector<std::uint64_t>{1, 2, 6, 19, 63});
}

TEST_CASE("oracle examples") {
  CHECK(brute_oracle(load_tiling("snub-trihexagonal"), SymmetryMode::Free, 3) ==
        std::vector<std::uint64_t>{3, 3, 7});
  CHECK(brute_oracle(load_tiling("cubic"), SymmetryMode::Free, 4) == std::vector<std::uint64_t>{1, 1, 2, 7});
  CHECK(brute_oracle(load_tiling("rectified-cubic"), SymmetryMode::Free, 4) ==
        std::vector<std::uint64_t>{2, 2, 9, 40});
  CHECK(brute_oracle(load_tiling("cubic"), SymmetryMode::Free, 0).empty());
}

TEST_CASE("oracle refuses a patch that is too small") {
  CHECK_THROWS_AS(brute_oracle(load_tiling("cubic"), SymmetryMode::Free, 4, 1), Error);
  CHECK(brute_oracle(load_tiling("cubic"), SymmetryMode::Free, 4, 3) == std::vector<std::uint64_t>{1, 1, 2, 7});
}

TEST_CASE("engine agrees with the oracle on every built-in and mode") {
  for (const auto& name : builtin_tiling_names()) {
    TilingSpec spec = load_tiling(name);
    for (auto mode : kModes) {
      CAPTURE(name);
      CAPTURE(to_string(mode));
      CHECK(run(spec, mode, 4) == brute_oracle(spec, mode, 4));
    }
  }
}

TEST_CASE("pruned generation matches the baseline") {
  for (const auto& name : builtin_tiling_names()) {
    TilingSpec spec = load_tiling(name);
    for (auto mode : kModes) {
      CAPTURE(name);
      CAPTURE(to_string(mode));
      std::size_t n = mode == SymmetryMode::Fixed ? std::min<std::size_t>(5, sweep_limit(name)) : 6;
      EnumerateOptions plain, pruned;
      pruned.pruned = true;
      plain.retain_forms = pruned.retain_forms = true;
      auto a = enumerate_counts(spec, mode, n, plain);
      auto b = enumerate_counts(spec, mode, n, pruned);
      CHECK(counts_of(a) == counts_of(b));
      for (std::size_t l = 0; l < a.levels.size(); ++l) CHECK(a.levels[l].forms->data == b.levels[l].forms->data);
    }
  }
}

TEST_CASE("mode monotonicity and the orbit-size bound") {
  for (const auto& name : builtin_tiling_names()) {
    CAPTURE(name);
    TilingSpec spec = load_tiling(name);
    std::size_t n = std::min<std::size_t>(5, sweep_limit(name));
    auto f = run(spec, SymmetryMode::Free, n);
    auto o = run(spec, SymmetryMode::OneSided, n);
    auto x = run(spec, SymmetryMode::Fixed, n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(f[i] <= o[i]);
      CHECK(o[i] <= x[i]);
      CHECK(x[i] <= spec.orientations.size() * f[i]);
    }
  }
}

TEST_CASE("results do not depend on thread count or orientation order") {
  std::mt19937_64 rng(8);
  for (const auto& name : builtin_tiling_names()) {
    CAPTURE(name);
    TilingSpec spec = load_tiling(name);
    TilingSpec permuted = spec;
    std::shuffle(permuted.orientations.begin() + 1, permuted.orientations.end(), rng);
    std::size_t n = sweep_limit(name);
    for (bool pruned : {false, true}) {
      EnumerateOptions one, four;
      one.retain_forms = four.retain_forms = true;
      one.pruned = four.pruned = pruned;
      four.threads = 4;
      auto a = enumerate_counts(spec, SymmetryMode::Free, n, one);
      auto b = enumerate_counts(spec, SymmetryMode::Free, n, four);
      auto c = enumerate_counts(permuted, SymmetryMode::Free, n, one);
      CHECK(counts_of(a) == counts_of(b));
      CHECK(counts_of(a) == counts_of(c));
      for (std::size_t l = 0; l < n; ++l) {
        CHECK(a.levels[l].forms->data == b.levels[l].forms->data);
        CHECK(a.levels[l].forms->data == c.levels[l].forms->data);
      }
    }
  }
}

TEST_CASE("stored forms are connected, canonical and of the right size") {
  for (const auto& name : builtin_tiling_names()) {
    CAPTURE(name);
    TilingSpec spec = load_tiling(name);
    Lattice lattice(spec);
    for (auto mode : kModes) {
      EnumerateOptions opts;
      opts.retain_forms = true;
      auto r = enumerate_counts(spec, mode, 4, opts);
      for (const auto& level : r.levels) {
        CHECK(level.count == level.forms->size());
        CHECK(level.forms->cells == level.n);
        for (std::size_t i = 0; i < level.forms->size(); ++i) {
          auto form = level.forms->form(i);
          CHECK(is_connected(lattice, form, level.n));
          CanonicalForm exact = to_canonical_form(lattice, form, mode);
          CHECK(canonical_form(spec, exact.cells, mode) == exact);
          if (i > 0) CHECK(compare_coords(level.forms->form(i - 1).data(), form.data(), form.size()) < 0);
        }
      }
    }
  }
}

TEST_CASE("connectivity check") {
  Lattice lattice(load_tiling("square"));
  std::vector<Coord> line{0, 0, 1, 0, 2, 0};
  std::vector<Coord> gap{0, 0, 2, 0};
  CHECK(is_connected(lattice, line, 3));
  CHECK_FALSE(is_connected(lattice, gap, 2));
  CHECK(is_connected(lattice, gap, 1));
}

TEST_CASE("form files") {
  TempDir dir("forms");
  TilingSpec spec = load_tiling("snub-trihexagonal");
  Lattice lattice(spec);
  EnumerateOptions opts;
  opts.emit_path = dir.path;
  opts.retain_forms = true;
  auto r = enumerate_counts(spec, SymmetryMode::Free, 4, opts);
  REQUIRE(r.form_files.size() == 4);
  CHECK(r.form_files[1] == dir.path / "snub-trihexagonal_free_n2.txt");

  std::ifstream in(r.form_files[1]);
  std::vector<std::string> lines, data;
  for (std::string line; std::getline(in, line);) {
    lines.push_back(line);
    if (!line.empty() && line[0] != '#') data.push_back(line);
  }
  CHECK(std::find(lines.begin(), lines.end(), "# tiling: snub-trihexagonal") != lines.end());
  CHECK(std::find(lines.begin(), lines.end(), "# mode: free") != lines.end());
  CHECK(std::find(lines.begin(), lines.end(), "# n: 2") != lines.end());
  CHECK(data == std::vector<std::string>{"0,0;8/21,2/21", "2/21,11/21;1/3,1/3", "8/21,23/21;13/21,19/21"});
  CHECK(std::is_sorted(data.begin(), data.end()));

  for (std::size_t l = 0; l < 4; ++l) {
    FormFile f = read_form_file(r.form_files[l], lattice);
    CHECK(f.tiling == "snub-trihexagonal");
    CHECK(f.mode == SymmetryMode::Free);
    CHECK(f.n == l + 1);
    CHECK(f.forms.size() == r.counts[l].count);
  }

  std::ofstream bad(dir.path / "bad.txt");
  bad << "# n: 2\n0,0;8/21,2/21\n0,0\n";
  bad.close();
  try {
    read_form_file(dir.path / "bad.txt", lattice);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("streaming from form files gives the same counts") {
  TempDir dir("stream");
  TilingSpec spec = load_tiling("tet-oct");
  EnumerateOptions opts;
  opts.emit_path = dir.path;
  CHECK(run(spec, SymmetryMode::Free, 6, opts) == std::vector<std::uint64_t>{2, 1, 4, 9, 44, 195});
  opts.pruned = true;
  opts.threads = 3;
  CHECK(run(spec, SymmetryMode::Free, 6, opts) == std::vector<std::uint64_t>{2, 1, 4, 9, 44, 195});
}

TEST_CASE("memory limit stops with partial counts") {
  TilingSpec spec = load_tiling("cubic");
  EnumerateOptions opts;
  opts.memory_limit = 20000;
  auto r = enumerate_counts(spec, SymmetryMode::Free, 9, opts);
  CHECK(r.partial);
  CHECK_FALSE(r.abort_reason.empty());
  REQUIRE_FALSE(r.counts.empty());
  CHECK(r.counts.size() < 9);
  std::vector<std::uint64_t> expected{1, 1, 2, 7, 23, 112, 607, 3811};
  for (std::size_t i = 0; i < r.counts.size(); ++i) CHECK(r.counts[i].count == expected[i]);
}

TEST_CASE("degenerate inputs") {
  CHECK(enumerate_counts(load_tiling("cubic"), SymmetryMode::Free, 0).counts.empty());
  TilingSpec isolated = parse_tiling_text(R"({"name": "isolated", "dim": 1,
      "orientations": [{"linear": [["1"]], "offset": ["0"]}],
      "orbits": [{"id": 0, "rep": ["0"], "neighbors": []}]})");
  CHECK(run(isolated, SymmetryMode::Free, 3) == std::vector<std::uint64_t>{1, 0, 0});
}
