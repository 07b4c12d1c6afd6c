#include "polyform/bfile.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#ifdef POLYFORM_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"
#include "json.hpp"

namespace polyform {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_long(std::string_view s, long& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t k = i; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9') return false;
  try {
    out = std::stol(std::string(s));
  } catch (const std::out_of_range&) {
    return false;
  }
  return true;
}

bool parse_natural(std::string_view s, mpz_class& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  out.set_str(std::string(s), 10);
  return true;
}

// Shared line grammar of b-files and plain count listings.
std::vector<std::pair<long, mpz_class>> parse_pairs(std::string_view text, bool& partial_marker) {
  std::vector<std::pair<long, mpz_class>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("partial") != std::string_view::npos) partial_marker = true;
      continue;
    }
    auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos) throw ParseError("expected 'index value'", line_no, 1);
    auto idx_text = line.substr(0, sep);
    auto val_text = trim(line.substr(sep));
    long idx = 0;
    mpz_class val;
    if (!parse_long(idx_text, idx)) throw ParseError("bad index '" + std::string(idx_text) + "'", line_no, 1);
    if (!parse_natural(val_text, val))
      throw ParseError("bad value '" + std::string(val_text) + "'", line_no, sep + 2);
    if (!out.empty() && idx <= out.back().first)
      throw ParseError("indices must increase strictly", line_no, 1);
    out.emplace_back(idx, std::move(val));
  }
  return out;
}

}  // namespace

bool is_sequence_id(std::string_view id) {
  static const std::regex re("A[0-9]{6}");
  return std::regex_match(id.begin(), id.end(), re);
}

BFile parse_bfile(std::string_view text, std::string id) {
  bool partial = false;
  BFile b;
  b.id = std::move(id);
  for (auto& [i, v] : parse_pairs(text, partial)) b.entries.push_back({i, std::move(v)});
  return b;
}

BFile read_bfile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open b-file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  std::string id;
  std::string stem = path.stem().string();
  if (stem.size() == 7 && stem[0] == 'b' && is_sequence_id("A" + stem.substr(1))) id = "A" + stem.substr(1);
  return parse_bfile(ss.str(), id);
}

std::string bfile_name(std::string_view id) { return "b" + std::string(id.substr(1)) + ".txt"; }

std::string bfile_url(std::string_view id) {
  return "https://oeis.org/" + std::string(id) + "/" + bfile_name(id);
}

std::filesystem::path default_bfile_cache() {
  if (const char* env = std::getenv("POLYFORM_BFILE_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
    return std::filesystem::path(xdg) / "polyform" / "bfiles";
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "polyform" / "bfiles";
  return std::filesystem::temp_directory_path() / "polyform-bfiles";
}

BFile fetch_bfile(std::string_view id, const std::filesystem::path& cache_dir, bool offline,
                  std::string_view server) {
  if (!is_sequence_id(id)) throw Error("not a sequence id: '" + std::string(id) + "' (expected A followed by 6 digits)");
  const auto cached = cache_dir / bfile_name(id);
  if (std::filesystem::exists(cached)) {
    BFile b = read_bfile(cached);
    b.id = std::string(id);
    return b;
  }
  if (offline) throw FetchError(std::string(id) + " is not cached in " + cache_dir.string() + " and --offline is set");

#ifndef POLYFORM_HAVE_OPENSSL
  if (server.starts_with("https://"))
    throw FetchError("this build has no TLS support; cannot reach " + std::string(server));
#endif
  httplib::Client client{std::string(server)};
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  const std::string target = "/" + std::string(id) + "/" + bfile_name(id);
  const std::string url = std::string(server) + target;
  auto res = client.Get(target);
  if (!res) throw FetchError("GET " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw FetchError("GET " + url + " returned HTTP " + std::to_string(res->status));

  // Parse before caching so a bad body never lands in the cache.
  BFile b = parse_bfile(res->body, std::string(id));
  std::filesystem::create_directories(cache_dir);
  auto tmp = cached;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << res->body;
    if (!out) throw FetchError("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, cached);
  return b;
}

CountsInput parse_counts(std::string_view text) {
  CountsInput in;
  auto body = trim(text);
  if (!body.empty() && body[0] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("counts are not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("counts") || !doc["counts"].is_array())
      throw ParseError("counts JSON needs a 'counts' array", 0, 0, "/counts");
    if (doc.contains("schema") && doc["schema"] != 1)
      throw ParseError("unsupported counts schema", 0, 0, "/schema");
    if (doc.contains("tiling") && doc["tiling"].is_string()) in.tiling = doc["tiling"].get<std::string>();
    if (doc.contains("mode") && doc["mode"].is_string()) in.mode = doc["mode"].get<std::string>();
    if (doc.contains("partial") && doc["partial"].is_boolean()) in.partial = doc["partial"].get<bool>();
    const auto& arr = doc["counts"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& e = arr[i];
      const std::string where = "/counts/" + std::to_string(i);
      if (!e.is_object() || !e.contains("n") || !e.contains("count") || !e["n"].is_number_integer())
        throw ParseError("expected {n, count}", 0, 0, where);
      mpz_class v;
      if (e["count"].is_number_unsigned()) {
        v = std::to_string(e["count"].get<std::uint64_t>());
      } else if (!e["count"].is_string() || !parse_natural(e["count"].get<std::string>(), v)) {
        throw ParseError("count must be a nonnegative integer", 0, 0, where + "/count");
      }
      in.counts[e["n"].get<long>()] = v;
    }
    return in;
  }
  for (auto& [i, v] : parse_pairs(text, in.partial)) in.counts[i] = std::move(v);
  return in;
}

CompareReport compare_counts(const CountsInput& ours, const BFile& theirs) {
  CompareReport r;
  r.sequence = theirs.id;
  std::map<long, CompareRow> rows;
  for (const auto& [n, v] : ours.counts) {
    auto& row = rows[n];
    row.n = n;
    row.ours = v;
  }
  for (const auto& e : theirs.entries) {
    auto& row = rows[e.index];
    row.n = e.index;
    row.theirs = e.value;
  }
  for (auto& [n, row] : rows) {
    if (row.ours && row.theirs) {
      ++r.overlap;
      row.status = *row.ours == *row.theirs ? CompareStatus::Match : CompareStatus::Mismatch;
      if (row.status == CompareStatus::Mismatch) ++r.mismatches;
    } else {
      row.status = row.ours ? CompareStatus::MissingTheirs : CompareStatus::MissingOurs;
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::string CompareReport::str() const {
  std::ostringstream os;
  for (const auto& row : rows) {
    os << row.n << ' ';
    switch (row.status) {
      case CompareStatus::Match:
        os << "match " << row.ours->get_str();
        break;
      case CompareStatus::Mismatch:
        os << "MISMATCH ours=" << row.ours->get_str() << " " << (sequence.empty() ? "b-file" : sequence) << "="
           << row.theirs->get_str();
        break;
      case CompareStatus::MissingOurs:
        os << "missing (not computed)";
        break;
      case CompareStatus::MissingTheirs:
        os << "missing (not in b-file) ours=" << row.ours->get_str();
        break;
    }
    os << '\n';
  }
  if (overlap == 0) {
    os << "nothing to compare\n";
  } else if (mismatches == 0) {
    os << "verdict: match (" << overlap << " terms)\n";
  } else {
    os << "verdict: mismatch (" << mismatches << " of " << overlap << " terms differ)\n";
  }
  return os.str();
}

}  // namespace polyform
