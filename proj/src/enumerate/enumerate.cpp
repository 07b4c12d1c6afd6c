#include "polyform/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "form_set.hpp"
#include "polyform/errors.hpp"

namespace polyform {

MemoryLimitExceeded::MemoryLimitExceeded(std::size_t level, std::uint64_t bytes)
    : Error("memory budget of " + std::to_string(bytes) + " bytes exceeded while building level " +
            std::to_string(level)),
      level_(level) {}

namespace {

using detail::FormSet;
using detail::hash_coords;

constexpr unsigned kShardBits = 6;
constexpr std::size_t kShards = std::size_t{1} << kShardBits;
constexpr std::size_t kBatchParents = 1 << 14;
constexpr std::size_t kChunkParents = 32;
constexpr std::size_t kFlushForms = 512;

std::vector<Coord> sort_forms(std::vector<Coord> data, std::size_t stride) {
  if (stride == 0) return data;
  std::size_t count = data.size() / stride;
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return compare_coords(&data[a * stride], &data[b * stride], stride) < 0;
  });
  std::vector<Coord> out(data.size());
  for (std::size_t i = 0; i < count; ++i)
    std::copy_n(&data[order[i] * stride], stride, &out[i * stride]);
  return out;
}

bool contains_cell(const Coord* cells, std::size_t n, std::size_t d, const Coord* q) {
  for (std::size_t c = 0; c < n; ++c)
    if (std::equal(q, q + d, cells + c * d)) return true;
  return false;
}

// Yields batches of parent forms.
class ParentSource {
 public:
  virtual ~ParentSource() = default;
  // Replaces `out` with up to max_forms parents; false when exhausted.
  virtual bool next(std::vector<Coord>& out, std::size_t max_forms) = 0;
  virtual std::size_t resident_bytes() const = 0;
};

class MemorySource final : public ParentSource {
 public:
  explicit MemorySource(const FormList& forms) : forms_(forms) {}
  bool next(std::vector<Coord>& out, std::size_t max_forms) override {
    std::size_t total = forms_.size();
    if (pos_ >= total) return false;
    std::size_t take = std::min(max_forms, total - pos_);
    out.assign(forms_.data.begin() + static_cast<std::ptrdiff_t>(pos_ * forms_.stride()),
               forms_.data.begin() + static_cast<std::ptrdiff_t>((pos_ + take) * forms_.stride()));
    pos_ += take;
    return true;
  }
  std::size_t resident_bytes() const override { return forms_.bytes(); }

 private:
  const FormList& forms_;
  std::size_t pos_ = 0;
};

class FileSource final : public ParentSource {
 public:
  FileSource(const std::filesystem::path& path, const Lattice& lattice, std::size_t cells)
      : in_(path), lattice_(lattice), cells_(cells), path_(path) {
    if (!in_) throw Error("cannot open form file " + path.string());
  }
  bool next(std::vector<Coord>& out, std::size_t max_forms) override {
    out.clear();
    std::string line;
    std::size_t got = 0;
    while (got < max_forms && std::getline(in_, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (lattice_.parse_text(line, out) != cells_)
        throw ParseError("form with wrong cell count in " + path_.string());
      ++got;
    }
    return got > 0;
  }
  std::size_t resident_bytes() const override { return 0; }

 private:
  std::ifstream in_;
  const Lattice& lattice_;
  std::size_t cells_;
  std::filesystem::path path_;
};

struct ShardedSet {
  explicit ShardedSet(std::size_t stride) {
    for (std::size_t s = 0; s < kShards; ++s) shards.emplace_back(stride);
  }
  std::vector<FormSet> shards;
  std::mutex locks[kShards];
  std::atomic<std::uint64_t> bytes{0};

  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (const auto& s : shards) c += s.size();
    return c;
  }
};

class Extender {
 public:
  Extender(const Lattice& lattice, SymmetryMode mode, std::size_t parent_cells, const ExtendOptions& opts)
      : lattice_(lattice),
        mode_(mode),
        n_(parent_cells),
        d_(lattice.dim()),
        opts_(opts),
        set_((parent_cells + 1) * lattice.dim()) {}

  FormList run(ParentSource& source) {
    unsigned threads = std::max(1u, opts_.threads);
    std::vector<std::unique_ptr<Worker>> workers;
    for (unsigned t = 0; t < threads; ++t) workers.push_back(std::make_unique<Worker>(*this));

    std::vector<Coord> batch;
    while (source.next(batch, kBatchParents)) {
      std::size_t count = batch.size() / (n_ * d_);
      std::atomic<std::size_t> cursor{0};
      auto body = [&](Worker& w) {
        while (!abort_.load(std::memory_order_relaxed)) {
          std::size_t begin = cursor.fetch_add(kChunkParents);
          if (begin >= count) break;
          std::size_t end = std::min(count, begin + kChunkParents);
          for (std::size_t p = begin; p < end; ++p) w.expand(&batch[p * n_ * d_]);
        }
        w.flush_all();
      };
      if (threads == 1) {
        body(*workers[0]);
      } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(body, std::ref(*workers[t]));
        for (auto& th : pool) th.join();
      }
      peak_ = std::max<std::uint64_t>(peak_, current_bytes(source, workers));
      if (abort_) throw MemoryLimitExceeded(n_ + 1, *opts_.memory_limit);
    }

    FormList out;
    out.cells = n_ + 1;
    out.dim = d_;
    if (opts_.pruned) {
      for (auto& w : workers) out.data.insert(out.data.end(), w->accepted.begin(), w->accepted.end());
    } else {
      for (auto& shard : set_.shards) {
        std::vector<Coord> part = shard.release();
        out.data.insert(out.data.end(), part.begin(), part.end());
      }
    }
    out.data = sort_forms(std::move(out.data), out.stride());
    return out;
  }

  std::uint64_t peak_bytes() const { return peak_; }

 private:
  struct Worker {
    explicit Worker(Extender& owner)
        : ex(owner), canon(owner.lattice_, owner.mode_), local(0), buffers(kShards) {}

    Extender& ex;
    Canonicalizer canon;
    std::vector<Coord> cell, child, canonical, reduced, reduced_canon, perimeter;
    FormSet local;
    std::vector<std::vector<Coord>> buffers;
    std::vector<Coord> accepted;

    void expand(const Coord* parent) {
      const std::size_t n = ex.n_, d = ex.d_;
      perimeter.clear();
      for (std::size_t c = 0; c < n; ++c) {
        const Coord* p = parent + c * d;
        auto offs = ex.lattice_.neighbor_offsets(p);
        for (std::size_t o = 0; o < offs.size(); o += d) {
          cell.resize(d);
          for (std::size_t i = 0; i < d; ++i) cell[i] = p[i] + offs[o + i];
          if (contains_cell(parent, n, d, cell.data())) continue;
          if (contains_cell(perimeter.data(), perimeter.size() / d, d, cell.data())) continue;
          perimeter.insert(perimeter.end(), cell.begin(), cell.end());
        }
      }
      if (ex.opts_.pruned) local = FormSet((n + 1) * d);
      child.assign(parent, parent + n * d);
      child.resize((n + 1) * d);
      for (std::size_t q = 0; q < perimeter.size(); q += d) {
        std::copy_n(&perimeter[q], d, &child[n * d]);
        canon.canonicalize(child, n + 1, canonical);
        if (ex.opts_.pruned) {
          if (local.insert(canonical.data()) && is_canonical_parent(parent))
            accepted.insert(accepted.end(), canonical.begin(), canonical.end());
        } else {
          route(canonical.data());
        }
      }
      if (ex.opts_.pruned) ex.check_budget(accepted.capacity() * sizeof(Coord));
    }

    // The canonical parent deletes the lexicographically last cell whose
    // removal keeps the child connected.
    bool is_canonical_parent(const Coord* parent) {
      const std::size_t n = ex.n_, d = ex.d_;
      for (std::size_t r = n + 1; r-- > 0;) {
        reduced.clear();
        for (std::size_t c = 0; c <= n; ++c)
          if (c != r) reduced.insert(reduced.end(), &canonical[c * d], &canonical[c * d] + d);
        if (!is_connected(ex.lattice_, reduced, n)) continue;
        canon.canonicalize(reduced, n, reduced_canon);
        return std::equal(reduced_canon.begin(), reduced_canon.end(), parent);
      }
      return false;
    }

    void route(const Coord* form) {
      std::size_t shard = hash_coords(form, ex.set_.shards.front().stride()) >> (64 - kShardBits);
      auto& buf = buffers[shard];
      buf.insert(buf.end(), form, form + ex.set_.shards.front().stride());
      if (buf.size() >= kFlushForms * ex.set_.shards.front().stride()) flush(shard);
    }

    void flush(std::size_t shard) {
      auto& buf = buffers[shard];
      if (buf.empty()) return;
      const std::size_t stride = ex.set_.shards.front().stride();
      std::lock_guard lock(ex.set_.locks[shard]);
      FormSet& set = ex.set_.shards[shard];
      std::size_t before = set.bytes();
      for (std::size_t i = 0; i < buf.size(); i += stride) set.insert(&buf[i]);
      std::size_t after = set.bytes();
      buf.clear();
      if (after != before) ex.check_budget(ex.set_.bytes.fetch_add(after - before) + (after - before));
    }

    void flush_all() {
      for (std::size_t s = 0; s < kShards; ++s) flush(s);
    }
  };

  void check_budget(std::uint64_t bytes) {
    if (opts_.memory_limit && bytes > *opts_.memory_limit) abort_ = true;
  }

  std::uint64_t current_bytes(const ParentSource& source, const std::vector<std::unique_ptr<Worker>>& workers) const {
    std::uint64_t b = source.resident_bytes() + set_.bytes.load();
    for (const auto& w : workers) b += w->accepted.capacity() * sizeof(Coord);
    return b;
  }

  const Lattice& lattice_;
  SymmetryMode mode_;
  std::size_t n_;
  std::size_t d_;
  ExtendOptions opts_;
  ShardedSet set_;
  std::atomic<bool> abort_{false};
  std::uint64_t peak_ = 0;
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace

CanonicalForm to_canonical_form(const Lattice& lattice, std::span<const Coord> form, SymmetryMode mode) {
  CanonicalForm f;
  f.mode = mode;
  f.tiling = lattice.spec().name;
  for (std::size_t c = 0; c < form.size(); c += lattice.dim()) f.cells.push_back(lattice.to_point(&form[c]));
  return f;
}

bool is_connected(const Lattice& lattice, std::span<const Coord> cells, std::size_t n) {
  if (n <= 1) return true;
  const std::size_t d = lattice.dim();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t c = stack.back();
    stack.pop_back();
    const Coord* p = &cells[c * d];
    auto offs = lattice.neighbor_offsets(p);
    for (std::size_t o = 0; o < offs.size(); o += d) {
      for (std::size_t m = 0; m < n; ++m) {
        if (seen[m]) continue;
        bool match = true;
        for (std::size_t i = 0; i < d && match; ++i) match = cells[m * d + i] == p[i] + offs[o + i];
        if (match) {
          seen[m] = 1;
          ++reached;
          stack.push_back(m);
        }
      }
    }
  }
  return reached == n;
}

Level initial_level(const Lattice& lattice, SymmetryMode mode) {
  const std::size_t d = lattice.dim();
  Canonicalizer canon(lattice, mode);
  FormSet set(d);
  std::vector<Coord> seeds = lattice.seed_cells(), out;
  for (std::size_t i = 0; i < seeds.size(); i += d) {
    canon.canonicalize(std::span<const Coord>(&seeds[i], d), 1, out);
    set.insert(out.data());
  }
  Level level;
  level.n = 1;
  level.count = set.size();
  FormList forms;
  forms.cells = 1;
  forms.dim = d;
  forms.data = sort_forms(set.release(), d);
  level.forms = std::move(forms);
  return level;
}

Level extend(const Lattice& lattice, const Level& level, SymmetryMode mode, const ExtendOptions& opts) {
  if (!level.forms) throw Error("extend requires the parent level's forms");
  MemorySource source(*level.forms);
  Extender ex(lattice, mode, level.n, opts);
  Level next;
  next.n = level.n + 1;
  next.forms = ex.run(source);
  next.count = next.forms->size();
  return next;
}

std::filesystem::path form_file_name(const std::filesystem::path& dir, const TilingSpec& spec,
                                     SymmetryMode mode, std::size_t n) {
  return dir / (spec.name + "_" + std::string(to_string(mode)) + "_n" + std::to_string(n) + ".txt");
}

void write_form_file(const std::filesystem::path& path, const Lattice& lattice, SymmetryMode mode,
                     const FormList& forms) {
  std::vector<std::string> lines;
  lines.reserve(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    std::string s;
    lattice.append_text(forms.form(i).data(), forms.cells, s);
    lines.push_back(std::move(s));
  }
  std::sort(lines.begin(), lines.end());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "# tiling: " << lattice.spec().name << '\n'
      << "# mode: " << to_string(mode) << '\n'
      << "# n: " << forms.cells << '\n'
      << "# count: " << forms.size() << '\n';
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

FormFile read_form_file(const std::filesystem::path& path, const Lattice& lattice) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open form file " + path.string());
  FormFile file;
  file.forms.dim = lattice.dim();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      key.erase(0, key.find_first_not_of(' '));
      value.erase(0, value.find_first_not_of(' '));
      if (key == "tiling") file.tiling = value;
      if (key == "mode") file.mode = parse_mode(value);
      if (key == "n") file.n = std::stoul(value);
      continue;
    }
    std::size_t cells;
    try {
      cells = lattice.parse_text(line, file.forms.data);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno, 1);
    }
    if (file.forms.cells == 0) file.forms.cells = cells;
    if (cells != file.forms.cells) throw ParseError("inconsistent cell count", lineno, 1);
  }
  if (file.forms.cells == 0 && file.n) file.forms.cells = *file.n;
  return file;
}

EnumerationResult enumerate_counts(const TilingSpec& spec, SymmetryMode mode, std::size_t n_max,
                                   const EnumerateOptions& opts) {
  Timer total;
  EnumerationResult result;
  result.tiling = spec.name;
  result.mode = mode;
  if (n_max == 0) return result;

  Lattice lattice(spec);
  const bool stream = opts.emit_path && !opts.retain_forms;
  if (opts.emit_path) std::filesystem::create_directories(*opts.emit_path);

  ExtendOptions ext;
  ext.pruned = opts.pruned;
  ext.threads = opts.threads;
  ext.memory_limit = opts.memory_limit;

  auto record = [&](Level& level, double secs) {
    result.counts.push_back({level.n, level.count, secs});
    if (opts.emit_path) {
      auto path = form_file_name(*opts.emit_path, spec, mode, level.n);
      write_form_file(path, lattice, mode, *level.forms);
      result.form_files.push_back(path);
    }
  };

  Timer t1;
  Level level = initial_level(lattice, mode);
  record(level, t1.seconds());
  if (opts.retain_forms) result.levels.push_back(level);
  if (stream) level.forms.reset();

  for (std::size_t n = 2; n <= n_max; ++n) {
    Timer t;
    Level next;
    try {
      Extender ex(lattice, mode, n - 1, ext);
      FormList forms;
      if (stream) {
        FileSource source(result.form_files.back(), lattice, n - 1);
        forms = ex.run(source);
      } else {
        MemorySource source(*level.forms);
        forms = ex.run(source);
      }
      result.peak_bytes = std::max(result.peak_bytes, ex.peak_bytes() + forms.bytes());
      next.n = n;
      next.count = forms.size();
      next.forms = std::move(forms);
    } catch (const MemoryLimitExceeded& e) {
      result.partial = true;
      result.abort_reason = e.what();
      break;
    }
    record(next, t.seconds());
    if (opts.retain_forms) result.levels.push_back(next);
    if (stream) next.forms.reset();
    level = std::move(next);
  }
  result.seconds = total.seconds();
  return result;
}

}  // namespace polyform
