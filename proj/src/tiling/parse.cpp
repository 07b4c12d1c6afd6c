#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "polyform/errors.hpp"
#include "polyform/tiling.hpp"

namespace polyform {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(const ParseOptions& opts) : opts_(opts) {}

  TilingSpec read(const json& doc) {
    expect_object(doc, "", {"name", "dim", "orientations", "orbits", "embedding", "metadata"});
    TilingSpec spec;
    spec.name = string_at(doc, "/name");
    const json& dim = member(doc, "", "dim");
    if (!dim.is_number_integer() || dim.get<long long>() <= 0)
      fail("/dim", "dim must be a positive integer");
    spec.dim = dim.get<std::size_t>();
    dim_ = spec.dim;

    const json& orients = member(doc, "", "orientations");
    if (!orients.is_array() || orients.empty()) fail("/orientations", "expected a non-empty array");
    for (std::size_t k = 0; k < orients.size(); ++k)
      spec.orientations.push_back(orientation(orients[k], "/orientations/" + std::to_string(k)));

    const json& orbits = member(doc, "", "orbits");
    if (!orbits.is_array() || orbits.empty()) fail("/orbits", "expected a non-empty array");
    std::set<int> ids;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      std::string path = "/orbits/" + std::to_string(i);
      OrbitSpec o = orbit(orbits[i], path);
      if (!ids.insert(o.id).second) fail(path + "/id", "duplicate orbit id " + std::to_string(o.id));
      spec.orbits.push_back(std::move(o));
    }

    if (doc.contains("embedding")) spec.embedding = embedding(doc["embedding"]);
    if (doc.contains("metadata")) {
      const json& meta = doc["metadata"];
      if (!meta.is_object()) fail("/metadata", "expected an object");
      for (const auto& [key, value] : meta.items())
        spec.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ParseError(what, 0, 0, path);
  }

  void expect_object(const json& j, const std::string& path,
                     std::initializer_list<std::string_view> allowed) const {
    if (!j.is_object()) fail(path.empty() ? "/" : path, "expected an object");
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) fail(path + "/" + key, "unknown key '" + key + "'");
    }
  }

  const json& member(const json& j, const std::string& path, const char* key) const {
    if (!j.contains(key)) fail(path + "/" + key, std::string("missing key '") + key + "'");
    return j[key];
  }

  std::string string_at(const json& doc, const std::string& pointer) const {
    const json& v = member(doc, "", pointer.c_str() + 1);
    if (!v.is_string()) fail(pointer, "expected a string");
    return v.get<std::string>();
  }

  Rat rational(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a rational string");
    try {
      return Rat::parse(j.get<std::string>());
    } catch (const ParseError& e) {
      fail(path, "malformed rational '" + j.get<std::string>() + "'");
    }
  }

  Point point(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of rationals");
    if (j.size() != dim_)
      fail(path, "dimension inconsistency: expected " + std::to_string(dim_) + " coordinates, got " +
                     std::to_string(j.size()));
    Point p(dim_);
    for (std::size_t i = 0; i < dim_; ++i) p[i] = rational(j[i], path + "/" + std::to_string(i));
    return p;
  }

  AffineMap orientation(const json& j, const std::string& path) const {
    expect_object(j, path, {"linear", "offset"});
    const json& lin = member(j, path, "linear");
    if (!lin.is_array() || lin.size() != dim_)
      fail(path + "/linear", "dimension inconsistency: expected " + std::to_string(dim_) + " rows");
    RatMatrix m(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      Point row = point(lin[r], path + "/linear/" + std::to_string(r));
      for (std::size_t c = 0; c < dim_; ++c) m(r, c) = row[c];
    }
    if (m.determinant().is_zero()) fail(path + "/linear", "singular linear part");
    AffineMap map(m, point(member(j, path, "offset"), path + "/offset"));
    if (opts_.require_unimodular && !map.preserves_lattice())
      fail(path + "/linear", "orientation does not preserve lattice");
    return map.normalized();
  }

  OrbitSpec orbit(const json& j, const std::string& path) const {
    expect_object(j, path, {"id", "rep", "neighbors", "render"});
    OrbitSpec o;
    const json& id = member(j, path, "id");
    if (!id.is_number_integer()) fail(path + "/id", "expected an integer");
    o.id = id.get<int>();
    o.rep = point(member(j, path, "rep"), path + "/rep");
    for (std::size_t i = 0; i < dim_; ++i) {
      if (o.rep[i] < Rat(0) || o.rep[i] >= Rat(1))
        fail(path + "/rep", "representative must lie in [0,1)^d");
    }
    const json& nb = member(j, path, "neighbors");
    if (!nb.is_array()) fail(path + "/neighbors", "expected an array");
    std::set<Point> seen;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      std::string npath = path + "/neighbors/" + std::to_string(i);
      Point p = point(nb[i], npath);
      if (p == o.rep) fail(npath, "neighbor equals the representative");
      if (!seen.insert(p).second) fail(npath, "duplicate neighbor " + p.str());
      o.neighbor_points.push_back(std::move(p));
    }
    if (j.contains("render")) o.render = render(j["render"], path + "/render");
    return o;
  }

  RenderGeometry render(const json& j, const std::string& path) const {
    expect_object(j, path, {"vertices", "faces"});
    RenderGeometry g;
    const json& verts = member(j, path, "vertices");
    if (!verts.is_array()) fail(path + "/vertices", "expected an array");
    for (std::size_t i = 0; i < verts.size(); ++i)
      g.vertices.push_back(point(verts[i], path + "/vertices/" + std::to_string(i)));
    if (j.contains("faces")) {
      const json& faces = j["faces"];
      if (!faces.is_array()) fail(path + "/faces", "expected an array");
      for (std::size_t f = 0; f < faces.size(); ++f) {
        std::string fpath = path + "/faces/" + std::to_string(f);
        if (!faces[f].is_array() || faces[f].size() < 3) fail(fpath, "expected >= 3 indices");
        std::vector<std::size_t> loop;
        for (const auto& idx : faces[f]) {
          if (!idx.is_number_unsigned() || idx.get<std::size_t>() >= g.vertices.size())
            fail(fpath, "face index out of range");
          loop.push_back(idx.get<std::size_t>());
        }
        g.faces.push_back(std::move(loop));
      }
    }
    return g;
  }

  std::vector<std::vector<double>> embedding(const json& j) const {
    if (!j.is_array() || j.size() != dim_) fail("/embedding", "expected d rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < dim_; ++r) {
      std::string path = "/embedding/" + std::to_string(r);
      if (!j[r].is_array() || j[r].size() != dim_) fail(path, "expected d numbers");
      std::vector<double> row;
      for (const auto& x : j[r]) {
        if (!x.is_number()) fail(path, "expected a number");
        row.push_back(x.get<double>());
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }

  ParseOptions opts_;
  std::size_t dim_ = 0;
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json rational_array(const Point& p) {
  json a = json::array();
  for (const auto& x : p) a.push_back(x.str());
  return a;
}

}  // namespace

TilingSpec parse_tiling_text(std::string_view text, const ParseOptions& opts) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("syntax error", line, col);
  }
  return Reader(opts).read(doc);
}

TilingSpec parse_tiling(std::istream& input, const ParseOptions& opts) {
  std::ostringstream buf;
  buf << input.rdbuf();
  return parse_tiling_text(buf.str(), opts);
}

std::string serialize_tiling(const TilingSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["dim"] = spec.dim;
  doc["orientations"] = json::array();
  for (const auto& m : spec.orientations) {
    json lin = json::array();
    for (std::size_t r = 0; r < spec.dim; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < spec.dim; ++c) row.push_back(m.linear()(r, c).str());
      lin.push_back(row);
    }
    doc["orientations"].push_back({{"linear", lin}, {"offset", rational_array(m.offset())}});
  }
  doc["orbits"] = json::array();
  for (const auto& o : spec.orbits) {
    json jo{{"id", o.id}, {"rep", rational_array(o.rep)}, {"neighbors", json::array()}};
    for (const auto& p : o.neighbor_points) jo["neighbors"].push_back(rational_array(p));
    if (o.render) {
      json r{{"vertices", json::array()}};
      for (const auto& v : o.render->vertices) r["vertices"].push_back(rational_array(v));
      if (!o.render->faces.empty()) r["faces"] = o.render->faces;
      jo["render"] = r;
    }
    doc["orbits"].push_back(jo);
  }
  if (spec.embedding) doc["embedding"] = *spec.embedding;
  if (!spec.metadata.empty()) doc["metadata"] = spec.metadata;
  return doc.dump(1);
}

TilingSpec load_tiling(std::string_view name_or_path, const ParseOptions& opts) {
  if (auto src = builtin_tiling_source(name_or_path)) return parse_tiling_text(*src, opts);
  std::ifstream in{std::string(name_or_path)};
  if (!in) throw Error("unknown tiling '" + std::string(name_or_path) + "' (not a built-in name or readable file)");
  return parse_tiling(in, opts);
}

}  // namespace polyform
