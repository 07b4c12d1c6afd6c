#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "polyform/enumerate.hpp"
#include "polyform/errors.hpp"
#include "polyform/packing.hpp"

namespace polyform {
namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ParseError("expected an object", 0, 0, where);
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw ParseError("unknown key '" + key + "'", 0, 0, where + "/" + key);
}

const json& required(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ParseError(std::string("missing key '") + key + "'", 0, 0, where);
  return obj.at(key);
}

// Runs a value parser, attaching the JSON pointer to any library error.
template <class F>
auto at_path(const std::string& where, F&& parse) {
  try {
    return parse();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), 0, 0, where);
  }
}

std::string string_at(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError("expected a string", 0, 0, where);
  return v.get<std::string>();
}

std::vector<Point> points_at(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError("expected an array of cells", 0, 0, where);
  std::vector<Point> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    try {
      out.push_back(Point::parse(string_at(v[i], where + "/" + std::to_string(i))));
    } catch (const ParseError& e) {
      if (!e.path().empty()) throw;
      throw ParseError(e.what(), 0, 0, where + "/" + std::to_string(i));
    }
  }
  return out;
}

TilingSpec resolve_tiling(const std::string& name, const std::filesystem::path& base) {
  if (builtin_tiling_source(name)) return load_tiling(name);
  std::filesystem::path p(name);
  if (p.is_relative() && !base.empty()) p = base / p;
  return load_tiling(p.string());
}

Region parse_region(const TilingSpec& spec, const json& r) {
  only_keys(r, "/region", {"kind", "size", "cells", "exclude"});
  std::string kind = string_at(required(r, "/region", "kind"), "/region/kind");
  std::vector<Point> exclude;
  if (r.contains("exclude")) exclude = points_at(r["exclude"], "/region/exclude");
  if (kind == "explicit") {
    Region region = explicit_region(spec, points_at(required(r, "/region", "cells"), "/region/cells"));
    for (const auto& e : exclude) {
      auto it = std::lower_bound(region.cells.begin(), region.cells.end(), e);
      if (it == region.cells.end() || *it != e) throw Error("excluded cell " + e.str() + " is not in the region");
      region.cells.erase(it);
    }
    return region;
  }
  const json& size = required(r, "/region", "size");
  if (!size.is_array()) throw ParseError("expected an array of sizes", 0, 0, "/region/size");
  std::vector<long> params;
  for (std::size_t i = 0; i < size.size(); ++i) {
    if (!size[i].is_number_integer()) throw ParseError("expected an integer", 0, 0, "/region/size/" + std::to_string(i));
    params.push_back(size[i].get<long>());
  }
  return generate_region(spec, kind, params, exclude);
}

}  // namespace

Instance parse_instance(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance is not valid JSON: ") + e.what());
  }
  only_keys(doc, "", {"name", "description", "tiling", "region", "pieces", "placement_group", "multiplicity"});

  Instance inst;
  if (doc.contains("name")) inst.name = string_at(doc["name"], "/name");
  if (doc.contains("description")) inst.description = string_at(doc["description"], "/description");
  inst.spec = resolve_tiling(string_at(required(doc, "", "tiling"), "/tiling"), base_dir);
  if (doc.contains("placement_group"))
    inst.group = at_path("/placement_group", [&] {
      return parse_placement_group(string_at(doc["placement_group"], "/placement_group"));
    });
  Multiplicity multiplicity = Multiplicity::Once;
  if (doc.contains("multiplicity"))
    multiplicity = at_path("/multiplicity", [&] {
      return parse_multiplicity(string_at(doc["multiplicity"], "/multiplicity"));
    });
  inst.region = parse_region(inst.spec, required(doc, "", "region"));

  const json& sources = required(doc, "", "pieces");
  if (!sources.is_array()) throw ParseError("expected an array of piece sources", 0, 0, "/pieces");
  std::vector<std::vector<Point>> forms;
  std::vector<std::size_t> counts;
  Lattice lattice(inst.spec);
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const std::string where = "/pieces/" + std::to_string(s);
    const json& src = sources[s];
    only_keys(src, where, {"forms", "file", "n", "mode", "count"});
    std::size_t count = 1;
    if (src.contains("count")) {
      if (!src["count"].is_number_unsigned() || src["count"].get<std::size_t>() == 0)
        throw ParseError("count must be a positive integer", 0, 0, where + "/count");
      count = src["count"].get<std::size_t>();
    }
    if (src.contains("forms") == src.contains("file"))
      throw ParseError("a piece source needs exactly one of 'forms' or 'file'", 0, 0, where);
    if (src.contains("forms")) {
      const json& list = src["forms"];
      if (!list.is_array()) throw ParseError("expected an array of forms", 0, 0, where + "/forms");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string at = where + "/forms/" + std::to_string(i);
        forms.push_back(at_path(at, [&] { return parse_cells(string_at(list[i], at)); }));
        counts.push_back(count);
      }
      continue;
    }
    std::filesystem::path file(string_at(src["file"], where + "/file"));
    if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
    FormFile ff = read_form_file(file, lattice);
    if (src.contains("n")) {
      std::size_t n = src["n"].get<std::size_t>();
      if (ff.forms.cells != n)
        throw Error(file.string() + " holds " + std::to_string(ff.forms.cells) + "-cell forms, expected " +
                    std::to_string(n));
    }
    if (src.contains("mode") && ff.mode && *ff.mode != parse_mode(string_at(src["mode"], where + "/mode")))
      throw Error(file.string() + " was enumerated in " + std::string(to_string(*ff.mode)) + " mode");
    for (std::size_t i = 0; i < ff.forms.size(); ++i) {
      forms.push_back(to_canonical_form(lattice, ff.forms.form(i), ff.mode.value_or(SymmetryMode::Free)).cells);
      counts.push_back(count);
    }
  }
  inst.pieces = make_piece_set(inst.spec, forms, inst.group, multiplicity, counts);
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open instance file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Instance inst = parse_instance(buf.str(), path.parent_path());
  if (inst.name.empty()) inst.name = path.stem().string();
  return inst;
}

}  // namespace polyform
