#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "polyform/cli.hpp"
#include "polyform/tiling.hpp"

using namespace polyform;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = {}) {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("polyform-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

std::string read(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kData = POLYFORM_TEST_DATA_DIR;
const std::string kBfiles = kData + "/bfiles";

bool ends_with_line(const std::string& out, const std::string& line) {
  return out.size() >= line.size() + 1 && out.compare(out.size() - line.size() - 1, line.size() + 1, line + "\n") == 0;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"bogus"}).code == cli::kUsage);
  CHECK(run({"enumerate", "--tiling", "cubic"}).code == cli::kUsage);
  CHECK(run({"enumerate", "--tiling", "cubic", "--max-n", "3", "--frobnicate"}).code == cli::kUsage);
  CHECK(run({"enumerate", "--tiling", "cubic", "--max-n", "3", "--threads", "0"}).code == cli::kUsage);
  CHECK(run({"enumerate", "--tiling", "cubic", "--max-n", "3", "--mode", "sideways"}).code == cli::kUsage);
  Run help = run({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("enumerate") != std::string::npos);
  CHECK(help.out.find("Exit codes") != std::string::npos);
}

TEST_CASE("enumerate") {
  Run snub = run({"enumerate", "--tiling", "snub-trihexagonal", "--mode", "free", "--max-n", "5"});
  CHECK(snub.code == cli::kOk);
  CHECK(snub.out == "1 3\n2 3\n3 7\n4 23\n5 69\n");

  Run dis = run({"enumerate", "--tiling", "disphenoid", "--mode", "free", "--max-n", "5"});
  CHECK(ends_with_line(dis.out, "5 14"));

  Run empty = run({"enumerate", "--tiling", "cubic", "--mode", "free", "--max-n", "0"});
  CHECK(empty.code == cli::kOk);
  CHECK(empty.out.empty());

  Run bad = run({"enumerate", "--tiling", "no-such-tiling", "--max-n", "3"});
  CHECK(bad.code == cli::kUsage);
  CHECK_FALSE(bad.err.empty());

  SUBCASE("json document") {
    Run js = run({"enumerate", "--tiling", "cubic", "--mode", "one-sided", "--max-n", "4", "--json"});
    REQUIRE(js.code == cli::kOk);
    auto doc = nlohmann::ordered_json::parse(js.out);
    std::vector<std::string> keys;
    for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"schema", "tiling", "mode", "counts", "partial"});
    CHECK(doc["schema"] == 1);
    CHECK(doc["tiling"] == "cubic");
    CHECK(doc["mode"] == "one-sided");
    CHECK(doc["partial"] == false);
    REQUIRE(doc["counts"].size() == 4);
    CHECK(doc["counts"][3]["n"] == 4);
    CHECK(doc["counts"][3]["count"] == 8);
  }

  SUBCASE("thread count and pruning do not change the output") {
    auto base = run({"enumerate", "--tiling", "tet-oct", "--max-n", "6", "--threads", "1"}).out;
    CHECK(run({"enumerate", "--tiling", "tet-oct", "--max-n", "6", "--threads", "4"}).out == base);
    CHECK(run({"enumerate", "--tiling", "tet-oct", "--max-n", "6", "--threads", "4", "--pruned"}).out == base);
  }

  SUBCASE("memory limit gives partial counts and exit 2") {
    Run lim = run({"enumerate", "--tiling", "rectified-cubic", "--max-n", "8", "--memory-limit", "200000"});
    CHECK(lim.code == cli::kResource);
    CHECK(lim.out.rfind("1 2\n2 2\n3 9\n", 0) == 0);
    CHECK(lim.out.find("# partial") != std::string::npos);
    Run js = run({"enumerate", "--tiling", "rectified-cubic", "--max-n", "8", "--memory-limit", "200000", "--json"});
    CHECK(js.code == cli::kResource);
    CHECK(nlohmann::json::parse(js.out)["partial"] == true);
  }

  SUBCASE("emitted forms") {
    TempDir dir;
    Run r = run({"enumerate", "--tiling", "square", "--max-n", "4", "--emit-forms", dir.path.string()});
    CHECK(r.code == cli::kOk);
    CHECK(fs::exists(dir.path / "square_free_n4.txt"));
  }
}

TEST_CASE("validate") {
  Run ok = run({"validate", "--tiling", "snub-trihexagonal"});
  CHECK(ok.code == cli::kOk);
  CHECK(run({"validate", "--tiling", "square", "--radius", "0"}).code == cli::kUsage);
  CHECK(run({"validate", "--tiling", "/no/such/file.json"}).code == cli::kUsage);

  TempDir dir;
  SUBCASE("dropped neighbor") {
    TilingSpec spec = load_tiling("snub-trihexagonal");
    spec.orbits[1].neighbor_points.pop_back();
    write(dir / "broken.json", serialize_tiling(spec));
    Run r = run({"validate", "--tiling", dir / "broken.json", "--radius", "4"});
    CHECK(r.code == cli::kValidation);
    CHECK(r.out.find("FAIL adjacency-symmetry") != std::string::npos);
  }
  SUBCASE("removed orientation") {
    TilingSpec spec = load_tiling("snub-trihexagonal");
    spec.orientations.erase(spec.orientations.begin() + 3);
    write(dir / "broken.json", serialize_tiling(spec));
    Run r = run({"validate", "--tiling", dir / "broken.json"});
    CHECK(r.code == cli::kValidation);
    CHECK(r.out.find("FAIL closure") != std::string::npos);
  }
  SUBCASE("non-unimodular linear part") {
    TilingSpec spec = load_tiling("square");
    spec.orientations[1] = AffineMap(RatMatrix(2, {2, 0, 0, 1}), Point{0, 0});
    write(dir / "broken.json", serialize_tiling(spec));
    Run r = run({"validate", "--tiling", dir / "broken.json"});
    CHECK(r.code == cli::kValidation);
    CHECK(r.out.find("FAIL unimodular") != std::string::npos);
  }
  SUBCASE("syntax error") {
    write(dir / "broken.json", "{\"name\": ");
    CHECK(run({"validate", "--tiling", dir / "broken.json"}).code == cli::kUsage);
  }
}

TEST_CASE("export") {
  TempDir dir;
  Run hex = run({"export", "--tiling", "snub-trihexagonal", "--form", "0,0", "--format", "svg", "-o", dir / "hex.svg"});
  CHECK(hex.code == cli::kOk);
  CHECK(read(dir / "hex.svg").find("<polygon") != std::string::npos);

  Run off = run({"export", "--tiling", "cubic", "--form", "0,0,0;1,0,0", "-o", dir / "two.off"});
  CHECK(off.code == cli::kOk);
  CHECK(read(dir / "two.off").rfind("OFF\n16 12 0\n", 0) == 0);

  SUBCASE("one file per form from an emitted level") {
    run({"enumerate", "--tiling", "snub-trihexagonal", "--max-n", "2", "--emit-forms", dir / "forms"});
    Run r = run({"export", "--tiling", "snub-trihexagonal", "--forms", dir / "forms/snub-trihexagonal_free_n2.txt",
                 "--format", "svg", "-o", dir / "svgs"});
    CHECK(r.code == cli::kOk);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir.path / "svgs")) {
      std::string svg = read(e.path().string());
      std::size_t polys = 0;
      for (auto p = svg.find("<polygon"); p != std::string::npos; p = svg.find("<polygon", p + 1)) ++polys;
      CHECK(polys == 2);
      ++files;
    }
    CHECK(files == 3);
  }

  SUBCASE("missing render data exits 4") {
    write(dir / "plain.json", R"({"name": "plain", "dim": 2,
      "orientations": [{"linear": [["1","0"],["0","1"]], "offset": ["0","0"]}],
      "orbits": [{"id": 0, "rep": ["0","0"], "neighbors": [["1","0"],["-1","0"],["0","1"],["0","-1"]]}]})");
    Run r = run({"export", "--tiling", dir / "plain.json", "--form", "0,0", "-o", dir / "x.svg"});
    CHECK(r.code == cli::kMissingData);
    CHECK(r.err.find("tiling has no render data") != std::string::npos);
  }

  SUBCASE("wrong format or cells") {
    CHECK(run({"export", "--tiling", "cubic", "--form", "0,0,0", "--format", "svg", "-o", dir / "x"}).code ==
          cli::kUsage);
    CHECK(run({"export", "--tiling", "square", "--form", "1/2,0", "-o", dir / "x.svg"}).code == cli::kUsage);
    CHECK(run({"export", "--tiling", "square", "-o", dir / "x.svg"}).code == cli::kUsage);
  }
}

TEST_CASE("compare") {
  std::string counts = run({"enumerate", "--tiling", "snub-trihexagonal", "--max-n", "7"}).out;
  Run ok = run({"compare", "--counts", "-", "--fetch", "A383908", "--offline", "--cache-dir", kBfiles}, counts);
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out.find("verdict: match (7 terms)") != std::string::npos);

  Run local = run({"compare", "--counts", "-", "--bfile", kBfiles + "/b383908.txt"}, counts);
  CHECK(local.code == cli::kOk);

  std::string altered = counts;
  altered.replace(altered.find("5 69"), 4, "5 70");
  Run bad = run({"compare", "--counts", "-", "--bfile", kBfiles + "/b383908.txt"}, altered);
  CHECK(bad.code == cli::kValidation);
  CHECK(bad.out.find("5 MISMATCH ours=70") != std::string::npos);

  Run none = run({"compare", "--counts", "-", "--bfile", kBfiles + "/b383908.txt"}, "12 5\n");
  CHECK(none.code == cli::kNothingToCompare);
  CHECK(none.err.find("nothing to compare") != std::string::npos);

  TempDir empty;
  Run miss = run({"compare", "--counts", "-", "--fetch", "A383908", "--offline", "--cache-dir", empty.path.string()},
                 counts);
  CHECK(miss.code == cli::kMissingData);

  CHECK(run({"compare", "--counts", "-"}, counts).code == cli::kUsage);
  CHECK(run({"compare", "--counts", "-", "--bfile", "x", "--fetch", "A383908"}, counts).code == cli::kUsage);
  CHECK(run({"compare", "--counts", "-", "--bfile", kBfiles + "/b383908.txt"}, "1 x\n").code == cli::kUsage);

  SUBCASE("json counts round trip") {
    std::string js = run({"enumerate", "--tiling", "cubic", "--max-n", "7", "--json"}).out;
    Run r = run({"compare", "--counts", "-", "--fetch", "A038119", "--offline", "--cache-dir", kBfiles, "--json"}, js);
    CHECK(r.code == cli::kOk);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["verdict"] == "match");
    CHECK(doc["rows"].size() == 10);
  }
}

TEST_CASE("pack") {
  const std::string pent = kData + "/instances/pentomino-3x20.json";
  Run all = run({"pack", "--instance", pent, "--count-all", "--modulo-region-symmetry"});
  CHECK(all.code == cli::kOk);
  CHECK(all.out.find("raw 8\n") != std::string::npos);
  CHECK(all.out.find("modulo-symmetry 2 ") != std::string::npos);

  Run first = run({"pack", "--instance", pent, "--first", "--show"});
  CHECK(first.code == cli::kOk);
  CHECK(first.out.find("verified 1 of 1") != std::string::npos);
  CHECK(first.out.find("solution 1") != std::string::npos);

  Run js = run({"pack", "--instance", pent, "--json", "--modulo-region-symmetry"});
  auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["schema"] == 1);
  CHECK(doc["raw"] == 8);
  CHECK(doc["modulo_symmetry"] == 2);

  Run tiny = run({"pack", "--tiling", "square", "--region", "rect", "--size", "2,2", "--piece", "0,0;1,0;2,0;3,0;4,0"});
  CHECK(tiny.code == cli::kOk);
  CHECK(tiny.out.find("raw 0\n") != std::string::npos);
  CHECK(tiny.out.find("infeasible") != std::string::npos);

  Run dominoes = run({"pack", "--tiling", "square", "--region", "rect", "--size", "4,2", "--piece", "0,0;1,0",
                      "--multiplicity", "unbounded"});
  CHECK(dominoes.out.find("raw 5\n") != std::string::npos);

  Run timed = run({"pack", "--instance", kData + "/instances/pentomino-6x10.json", "--limit-time", "0.05"});
  CHECK(timed.code == cli::kResource);
  CHECK(timed.out.find("complete no") != std::string::npos);

  CHECK(run({"pack", "--instance", pent, "--first", "--limit", "3"}).code == cli::kUsage);
  CHECK(run({"pack"}).code == cli::kUsage);
  CHECK(run({"pack", "--instance", "/no/such.json"}).code == cli::kUsage);
}

TEST_CASE("fetch") {
  Run r = run({"fetch", "A343909", "--offline", "--cache-dir", kBfiles});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("\n1 2\n2 1\n3 4\n") != std::string::npos);
  TempDir empty;
  CHECK(run({"fetch", "A343909", "--offline", "--cache-dir", empty.path.string()}).code == cli::kMissingData);
  CHECK(run({"fetch", "B343909", "--offline"}).code == cli::kUsage);
}

TEST_CASE("enumerate piped into compare matches every vendored sequence up to n = 7") {
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"snub-trihexagonal", "A383908"}, {"cubic", "A038119"},    {"tet-oct", "A343909"},
      {"rectified-cubic", "A384254"},   {"truncated-octahedral", "A038181"}, {"disphenoid", "A385024"},
      {"square", "A000105"}};
  for (const auto& [tiling, id] : rows) {
    CAPTURE(tiling);
    std::string counts = run({"enumerate", "--tiling", tiling, "--max-n", "7", "--json"}).out;
    Run r = run({"compare", "--counts", "-", "--fetch", id, "--offline", "--cache-dir", kBfiles}, counts);
    CHECK(r.code == cli::kOk);
  }
}
