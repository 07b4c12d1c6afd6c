#pragma once

// OEIS b-file client and count comparison.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "polyform/errors.hpp"

namespace polyform {

struct BFileEntry {
  long index = 0;
  mpz_class value;
};

struct BFile {
  std::string id;  // "A343909"
  std::vector<BFileEntry> entries;
};

bool is_sequence_id(std::string_view id);

/// Blank lines and lines starting with '#' are skipped; every other line is
/// `index value`. Indices must increase strictly and values be nonnegative.
/// Throws ParseError carrying the 1-based line number.
BFile parse_bfile(std::string_view text, std::string id = {});
BFile read_bfile(const std::filesystem::path& path);

/// "b343909.txt"
std::string bfile_name(std::string_view id);
/// "https://oeis.org/A343909/b343909.txt"
std::string bfile_url(std::string_view id);

/// $POLYFORM_BFILE_CACHE, else $XDG_CACHE_HOME/polyform/bfiles, else
/// ~/.cache/polyform/bfiles.
std::filesystem::path default_bfile_cache();

class FetchError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::string_view kOeisServer = "https://oeis.org";

/// Cache first. On a miss, and unless offline, downloads
/// `<server>/<id>/b<digits>.txt` and stores the body in the cache after it
/// parses.
BFile fetch_bfile(std::string_view id, const std::filesystem::path& cache_dir, bool offline,
                  std::string_view server = kOeisServer);

/// Counts as produced by `enumerate`, either the JSON document or plain
/// `n count` lines.
struct CountsInput {
  std::optional<std::string> tiling;
  std::optional<std::string> mode;
  std::map<long, mpz_class> counts;
  bool partial = false;
};
CountsInput parse_counts(std::string_view text);

enum class CompareStatus { Match, Mismatch, MissingOurs, MissingTheirs };

struct CompareRow {
  long n = 0;
  CompareStatus status = CompareStatus::Match;
  std::optional<mpz_class> ours;
  std::optional<mpz_class> theirs;
};

struct CompareReport {
  std::string sequence;
  std::vector<CompareRow> rows;  // ascending n over the union of indices
  std::size_t overlap = 0;
  std::size_t mismatches = 0;

  bool match() const { return overlap > 0 && mismatches == 0; }
  std::string str() const;
};

CompareReport compare_counts(const CountsInput& ours, const BFile& theirs);

}  // namespace polyform
