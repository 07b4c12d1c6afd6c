#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyform/bfile.hpp"
#include "polyform/cli.hpp"
#include "polyform/enumerate.hpp"
#include "polyform/export.hpp"
#include "polyform/packing.hpp"

namespace polyform::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Carries an exit code out of a command body.
struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw Failure{code, std::move(message)}; }

TilingSpec open_tiling(const std::string& name, const ParseOptions& opts = {}) {
  try {
    return load_tiling(name, opts);
  } catch (const Error& e) {
    fail(kUsage, e.what());
  }
}

std::string slurp(const std::string& path, std::istream& in) {
  std::stringstream ss;
  if (path == "-") {
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(kUsage, "cannot open " + path);
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<Point>> forms_from_file(const TilingSpec& spec, const fs::path& path) {
  Lattice lattice(spec);
  FormFile ff = read_form_file(path, lattice);
  std::vector<std::vector<Point>> out;
  const std::size_t dim = spec.dim;
  for (std::size_t i = 0; i < ff.forms.size(); ++i) {
    auto f = ff.forms.form(i);
    auto& cells = out.emplace_back();
    for (std::size_t c = 0; c < ff.forms.cells; ++c) cells.push_back(lattice.to_point(f.data() + c * dim));
  }
  return out;
}

// ---------------------------------------------------------------- enumerate

struct EnumerateArgs {
  std::string tiling;
  std::string mode = "free";
  std::size_t max_n = 0;
  std::string emit_forms;
  bool pruned = false;
  unsigned threads = 1;
  bool json = false;
  std::uint64_t memory_limit = 0;
};

int cmd_enumerate(const EnumerateArgs& a, std::ostream& out, std::ostream& err) {
  TilingSpec spec = open_tiling(a.tiling);
  SymmetryMode mode = parse_mode(a.mode);
  EnumerateOptions opts;
  opts.pruned = a.pruned;
  opts.threads = a.threads;
  if (!a.emit_forms.empty()) {
    fs::create_directories(a.emit_forms);
    opts.emit_path = a.emit_forms;
  }
  if (a.memory_limit) opts.memory_limit = a.memory_limit;

  EnumerationResult r = enumerate_counts(spec, mode, a.max_n, opts);
  if (a.json) {
    json doc = {{"schema", 1}, {"tiling", spec.name}, {"mode", std::string(to_string(mode))},
                {"counts", json::array()}, {"partial", r.partial}};
    for (const auto& c : r.counts) doc["counts"].push_back({{"n", c.n}, {"count", c.count}});
    out << doc.dump(2) << '\n';
  } else {
    for (const auto& c : r.counts) out << c.n << ' ' << c.count << '\n';
    if (r.partial) out << "# partial: " << r.abort_reason << '\n';
  }
  if (r.partial) {
    err << "enumeration stopped early: " << r.abort_reason << '\n';
    return kResource;
  }
  return kOk;
}

// ----------------------------------------------------------------- validate

int cmd_validate(const std::string& tiling, int radius, std::ostream& out) {
  if (radius < 1) fail(kUsage, "--radius must be at least 1");
  ParseOptions lenient;
  lenient.require_unimodular = false;
  TilingSpec spec = open_tiling(tiling, lenient);
  ValidationReport rep = validate(spec, radius);
  out << rep.str();
  if (!rep.str().empty() && rep.str().back() != '\n') out << '\n';
  return rep.ok() ? kOk : kValidation;
}

// ------------------------------------------------------------------- export

struct ExportArgs {
  std::string tiling;
  std::string forms_file;
  std::vector<std::string> form;
  std::string format;
  std::string output;
  bool gallery = false;
};

int cmd_export(const ExportArgs& a, std::ostream& out) {
  TilingSpec spec = open_tiling(a.tiling);
  if (!has_render_data(spec)) fail(kMissingData, "tiling has no render data");
  std::string format = a.format.empty() ? (spec.dim == 2 ? "svg" : "off") : a.format;
  if (format != "svg" && format != "off") fail(kUsage, "--format must be svg or off");
  if ((format == "svg") != (spec.dim == 2)) fail(kUsage, "svg needs a 2D tiling and off a 3D tiling");

  std::vector<std::vector<Point>> forms;
  if (!a.forms_file.empty()) forms = forms_from_file(spec, a.forms_file);
  for (const auto& f : a.form) forms.push_back(parse_cells(f));
  if (forms.empty()) fail(kUsage, "nothing to export: give --forms FILE or --form CELLS");
  for (const auto& f : forms)
    for (const auto& c : f)
      if (!is_cell(spec, c)) fail(kUsage, "not a cell of " + spec.name + ": " + c.str());

  auto write = [&](const fs::path& p, const std::string& body) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    f << body;
    if (!f) fail(kUsage, "cannot write " + p.string());
    out << p.string() << '\n';
  };

  if (forms.size() == 1 || (format == "svg" && a.gallery)) {
    write(a.output, format == "svg" ? export_svg(spec, forms) : export_off(spec, forms.front()));
    return kOk;
  }
  // One file per form inside the output directory.
  const int width = static_cast<int>(std::to_string(forms.size()).size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    std::string idx = std::to_string(i + 1);
    idx.insert(0, static_cast<std::size_t>(width) - idx.size(), '0');
    fs::path p = fs::path(a.output) / ("form-" + idx + "." + format);
    write(p, format == "svg" ? export_svg(spec, std::span(&forms[i], 1)) : export_off(spec, forms[i]));
  }
  return kOk;
}

// ------------------------------------------------------------------ compare

struct CompareArgs {
  std::string counts;
  std::string bfile;
  std::string fetch;
  bool offline = false;
  std::string cache_dir;
  bool json = false;
};

BFile obtain_bfile(const std::string& id, const std::string& cache_dir, bool offline) {
  try {
    return fetch_bfile(id, cache_dir.empty() ? default_bfile_cache() : fs::path(cache_dir), offline);
  } catch (const FetchError& e) {
    fail(offline ? kMissingData : kResource, e.what());
  }
}

int cmd_compare(const CompareArgs& a, std::istream& in, std::ostream& out) {
  CountsInput ours = parse_counts(slurp(a.counts, in));
  BFile theirs = a.bfile.empty() ? obtain_bfile(a.fetch, a.cache_dir, a.offline) : read_bfile(a.bfile);
  CompareReport rep = compare_counts(ours, theirs);
  if (a.json) {
    json doc = {{"schema", 1}, {"sequence", rep.sequence}, {"rows", json::array()},
                {"verdict", rep.overlap == 0 ? "nothing-to-compare" : rep.match() ? "match" : "mismatch"}};
    for (const auto& row : rep.rows) {
      static const char* names[] = {"match", "mismatch", "missing-ours", "missing-theirs"};
      json j = {{"n", row.n}, {"status", names[static_cast<int>(row.status)]}};
      if (row.ours) j["ours"] = row.ours->get_str();
      if (row.theirs) j["theirs"] = row.theirs->get_str();
      doc["rows"].push_back(j);
    }
    out << doc.dump(2) << '\n';
  } else {
    out << rep.str();
  }
  if (rep.overlap == 0) fail(kNothingToCompare, "nothing to compare");
  return rep.match() ? kOk : kValidation;
}

// --------------------------------------------------------------------- pack

struct PackArgs {
  std::string instance;
  std::string tiling;
  std::string region;
  std::vector<long> size;
  std::string exclude;
  std::vector<std::string> piece_files;
  std::vector<std::string> pieces;
  std::string group;
  std::string multiplicity;
  bool count_all = false;
  bool first = false;
  std::uint64_t limit = 0;
  double limit_time = 0;
  bool modulo = false;
  bool show = false;
  std::uint64_t shuffle_seed = 0;
  bool json = false;
};

Instance assemble_instance(const PackArgs& a) {
  if (!a.instance.empty()) {
    Instance inst = load_instance(a.instance);
    if (!a.group.empty()) inst.group = parse_placement_group(a.group);
    if (!a.multiplicity.empty()) inst.pieces.multiplicity = parse_multiplicity(a.multiplicity);
    if (!a.group.empty()) {
      // Pieces must be re-identified under the new group's mode.
      std::vector<std::vector<Point>> cells;
      std::vector<std::size_t> counts;
      for (const auto& p : inst.pieces.pieces) {
        cells.push_back(p.form.cells);
        counts.push_back(p.count);
      }
      inst.pieces = make_piece_set(inst.spec, cells, inst.group, inst.pieces.multiplicity, counts);
    }
    return inst;
  }
  if (a.tiling.empty() || a.region.empty()) fail(kUsage, "pack needs --instance, or --tiling with --region");
  Instance inst;
  inst.spec = open_tiling(a.tiling);
  inst.name = "command-line";
  std::vector<Point> exclude = a.exclude.empty() ? std::vector<Point>{} : parse_cells(a.exclude);
  inst.region = generate_region(inst.spec, a.region, a.size, exclude);
  inst.group = a.group.empty() ? PlacementGroup::Rotations : parse_placement_group(a.group);
  Multiplicity mult = a.multiplicity.empty() ? Multiplicity::Once : parse_multiplicity(a.multiplicity);
  std::vector<std::vector<Point>> cells;
  for (const auto& f : a.piece_files)
    for (auto& form : forms_from_file(inst.spec, f)) cells.push_back(std::move(form));
  for (const auto& p : a.pieces) cells.push_back(parse_cells(p));
  if (cells.empty()) fail(kUsage, "no pieces given (use --pieces FILE or --piece CELLS)");
  inst.pieces = make_piece_set(inst.spec, cells, inst.group, mult);
  return inst;
}

int cmd_pack(const PackArgs& a, std::ostream& out) {
  if (int(a.count_all) + int(a.first) + int(a.limit > 0) > 1)
    fail(kUsage, "--count-all, --first and --limit are exclusive");
  Instance inst = assemble_instance(a);

  PackOptions opts;
  if (a.first) opts.limit = 1;
  if (a.limit) opts.limit = a.limit;
  if (a.limit_time > 0) opts.time_limit_seconds = a.limit_time;
  opts.modulo_region_symmetry = a.modulo;
  opts.keep_solutions = true;
  opts.shuffle_seed = a.shuffle_seed;
  // Keeping every solution of a full count can be large; only do it on request.
  if (!a.show && !a.first && !a.limit) opts.keep_solutions = false;

  PackResult r = solve_pack(inst.spec, inst.region, inst.pieces, inst.group, opts);

  std::size_t bad = 0;
  std::vector<std::vector<Placement>> sols;
  for (const auto& s : r.solutions) {
    auto& used = sols.emplace_back();
    for (auto i : s.placements) used.push_back(r.placements[i]);
    if (!verify_solution(inst.spec, inst.region, inst.pieces, inst.group, used).ok) ++bad;
  }

  if (a.json) {
    json doc = {{"schema", 1},
                {"instance", inst.name},
                {"region_cells", inst.region.size()},
                {"pieces", inst.pieces.pieces.size()},
                {"placement_group", std::string(to_string(inst.group))},
                {"raw", r.raw_count},
                {"complete", r.complete},
                {"infeasible", r.infeasible},
                {"stop_reason", r.stop_reason},
                {"verified", sols.size() - bad}};
    if (r.modulo_symmetry) {
      doc["modulo_symmetry"] = *r.modulo_symmetry;
      doc["region_symmetries"] = r.region_symmetry_count;
    }
    if (a.show) {
      doc["solutions"] = json::array();
      for (const auto& s : sols) {
        json js = json::array();
        for (const auto& p : s) js.push_back({{"piece", p.piece}, {"cells", serialize_cells(p.cells)}});
        doc["solutions"].push_back(js);
      }
    }
    out << doc.dump(2) << '\n';
  } else {
    out << "instance " << inst.name << '\n';
    out << "region " << inst.region.size() << " cells, " << inst.pieces.pieces.size() << " pieces, "
        << to_string(inst.group) << '\n';
    if (r.infeasible) out << "infeasible: piece cells do not match region cells\n";
    out << "raw " << r.raw_count << '\n';
    if (r.modulo_symmetry)
      out << "modulo-symmetry " << *r.modulo_symmetry << " (" << r.region_symmetry_count << " region symmetries)\n";
    out << "complete " << (r.complete ? "yes" : "no") << '\n';
    if (!r.stop_reason.empty()) out << "stop " << r.stop_reason << '\n';
    if (!sols.empty()) out << "verified " << sols.size() - bad << " of " << sols.size() << '\n';
    if (a.show) {
      for (std::size_t i = 0; i < sols.size(); ++i) {
        out << "solution " << i + 1 << '\n';
        for (const auto& p : sols[i]) out << "  piece " << p.piece << ": " << serialize_cells(p.cells) << '\n';
      }
    }
  }
  if (bad) fail(kValidation, std::to_string(bad) + " solutions failed verification");
  // Reaching a requested solution count is success; running out of time is not.
  if (!r.complete && !(opts.limit && r.raw_count >= *opts.limit)) return kResource;
  return kOk;
}

// -------------------------------------------------------------------- fetch

int cmd_fetch(const std::string& id, const std::string& cache_dir, bool offline, std::ostream& out) {
  BFile b = obtain_bfile(id, cache_dir, offline);
  out << b.id << ": " << b.entries.size() << " terms";
  if (!b.entries.empty()) out << " (n = " << b.entries.front().index << ".." << b.entries.back().index << ")";
  out << '\n';
  for (const auto& e : b.entries) out << e.index << ' ' << e.value.get_str() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Enumerate, validate, export, compare and pack polyforms on periodic tilings", "polyform"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.footer(
      "Exit codes: 0 ok, 1 usage or parse error, 2 resource or time limit, 3 validation failure,\n"
      "4 missing data, 5 nothing to compare.");

  EnumerateArgs en;
  auto* enumerate = app.add_subcommand("enumerate", "Count polyforms for n = 1..N");
  enumerate->add_option("--tiling", en.tiling, "Built-in name or spec file")->required();
  enumerate->add_option("--mode", en.mode, "free | one-sided | fixed")->capture_default_str();
  enumerate->add_option("--max-n", en.max_n, "Largest cell count")->required();
  enumerate->add_option("--emit-forms", en.emit_forms, "Write one canonical-form file per n into DIR");
  enumerate->add_flag("--pruned", en.pruned, "Use canonical-parent pruning instead of global dedup");
  enumerate->add_option("--threads", en.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  enumerate->add_flag("--json", en.json, "Print the counts document instead of 'n count' lines");
  enumerate->add_option("--memory-limit", en.memory_limit, "Abort with partial counts beyond BYTES");

  std::string v_tiling;
  int v_radius = kDefaultValidationRadius;
  auto* validate_cmd = app.add_subcommand("validate", "Check a tiling spec for consistency");
  validate_cmd->add_option("--tiling", v_tiling, "Built-in name or spec file")->required();
  validate_cmd->add_option("--radius", v_radius, "Patch radius in graph steps (>= 1)")->capture_default_str();

  ExportArgs ex;
  auto* export_cmd = app.add_subcommand("export", "Write SVG (2D) or OFF (3D) geometry");
  export_cmd->add_option("--tiling", ex.tiling, "Built-in name or spec file")->required();
  export_cmd->add_option("--forms", ex.forms_file, "Form file written by enumerate --emit-forms");
  export_cmd->add_option("--form", ex.form, "A cell list 'x,y;x,y;...' (repeatable)");
  export_cmd->add_option("--format", ex.format, "svg | off (default from the tiling dimension)");
  export_cmd->add_option("-o,--output", ex.output, "Output file, or directory for several forms")->required();
  export_cmd->add_flag("--gallery", ex.gallery, "Lay several 2D forms out in one SVG");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Check counts against an OEIS b-file");
  compare->add_option("--counts", cmp.counts, "Output of enumerate (text or --json), '-' for stdin")->required();
  auto* bfile_opt = compare->add_option("--bfile", cmp.bfile, "Local b-file");
  auto* fetch_opt = compare->add_option("--fetch", cmp.fetch, "Sequence id, e.g. A343909");
  bfile_opt->excludes(fetch_opt);
  compare->add_flag("--offline", cmp.offline, "Never touch the network");
  compare->add_option("--cache-dir", cmp.cache_dir, "b-file cache (default $POLYFORM_BFILE_CACHE)");
  compare->add_flag("--json", cmp.json, "Machine-readable report");

  PackArgs pk;
  auto* pack = app.add_subcommand("pack", "Solve an exact-cover packing instance");
  pack->add_option("--instance", pk.instance, "Instance JSON file");
  pack->add_option("--tiling", pk.tiling, "Built-in name or spec file");
  pack->add_option("--region", pk.region, "rect | box | bcc-box | tet-region");
  pack->add_option("--size", pk.size, "Region parameters, comma separated")->delimiter(',');
  pack->add_option("--exclude", pk.exclude, "Cells removed from the region");
  pack->add_option("--pieces", pk.piece_files, "Form file of pieces (repeatable)");
  pack->add_option("--piece", pk.pieces, "A piece as a cell list (repeatable)");
  pack->add_option("--group", pk.group, "rotations | rotations-and-reflections");
  pack->add_option("--multiplicity", pk.multiplicity, "once | unbounded");
  pack->add_flag("--count-all", pk.count_all, "Count every solution (default)");
  pack->add_flag("--first", pk.first, "Stop at the first solution");
  pack->add_option("--limit", pk.limit, "Stop after K solutions");
  pack->add_option("--limit-time", pk.limit_time, "Stop after SECONDS");
  pack->add_flag("--modulo-region-symmetry", pk.modulo, "Also count solutions up to region symmetry");
  pack->add_flag("--show", pk.show, "Print the solutions");
  pack->add_option("--shuffle-seed", pk.shuffle_seed, "Visit placements in a seeded random order");
  pack->add_flag("--json", pk.json, "Machine-readable result");

  std::string f_id, f_cache;
  bool f_offline = false;
  auto* fetch = app.add_subcommand("fetch", "Download (or read from cache) an OEIS b-file");
  fetch->add_option("id", f_id, "Sequence id, e.g. A343909")->required();
  fetch->add_option("--cache-dir", f_cache, "b-file cache (default $POLYFORM_BFILE_CACHE)");
  fetch->add_flag("--offline", f_offline, "Never touch the network");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "polyform: " << e.what() << '\n';
    if (!app.get_subcommands().empty())
      err << "run 'polyform " << app.get_subcommands().front()->get_name() << " --help' for usage\n";
    return kUsage;
  }

  try {
    if (*enumerate) return cmd_enumerate(en, out, err);
    if (*validate_cmd) return cmd_validate(v_tiling, v_radius, out);
    if (*export_cmd) return cmd_export(ex, out);
    if (*compare) {
      if (cmp.bfile.empty() == cmp.fetch.empty()) fail(kUsage, "compare needs exactly one of --bfile or --fetch");
      return cmd_compare(cmp, in, out);
    }
    if (*pack) return cmd_pack(pk, out);
    if (*fetch) return cmd_fetch(f_id, f_cache, f_offline, out);
  } catch (const Failure& f) {
    err << "polyform: " << f.message << '\n';
    return f.code;
  } catch (const MissingRenderData& e) {
    err << "polyform: " << e.what() << '\n';
    return kMissingData;
  } catch (const MemoryLimitExceeded& e) {
    err << "polyform: " << e.what() << '\n';
    return kResource;
  } catch (const Error& e) {
    err << "polyform: " << e.what() << '\n';
    return kUsage;
  } catch (const std::bad_alloc&) {
    err << "polyform: out of memory\n";
    return kResource;
  } catch (const fs::filesystem_error& e) {
    err << "polyform: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace polyform::cli
