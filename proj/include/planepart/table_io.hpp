#pragma once

// On-disk trace table cache and CSV export.
//
// Cache layout (text, newline-delimited):
//   PPT1
//   n_max <N>
//   mode exact|logspace
//   version 1
//   <row 1> ... <row N>
//   END <fnv1a-64 of the row lines, hex>
// Exact rows hold Q(1..n, n) as decimal strings; logspace rows hold
// log_scale[n] followed by the mantissas for m = 1..n (%.17g).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "planepart/errors.hpp"
#include "planepart/exact.hpp"
#include "planepart/logspace.hpp"

namespace planepart {

inline constexpr int kTableFormatVersion = 1;
inline constexpr const char* kTableMagic = "PPT1";

enum class TableMode { exact, logspace };

inline const char* to_string(TableMode m) { return m == TableMode::exact ? "exact" : "logspace"; }

namespace detail {

class Fnv1a {
public:
  void update(const std::string& s) {
    for (unsigned char c : s) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ull;
    }
    hash_ ^= '\n';
    hash_ *= 0x100000001b3ull;
  }
  std::string hex() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << hash_;
    return os.str();
  }

private:
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_rows(std::ostream& os, int n_max, TableMode mode,
                       const std::function<std::string(int)>& row_text) {
  os << kTableMagic << '\n'
     << "n_max " << n_max << '\n'
     << "mode " << to_string(mode) << '\n'
     << "version " << kTableFormatVersion << '\n';
  Fnv1a h;
  for (int n = 1; n <= n_max; ++n) {
    const std::string line = row_text(n);
    h.update(line);
    os << line << '\n';
  }
  os << "END " << h.hex() << '\n';
}

// Reads and validates the header and checksum; returns the row lines.
inline std::vector<std::string> read_rows(std::istream& is, int n_max, TableMode mode) {
  auto fail = [](const std::string& what) -> std::vector<std::string> {
    throw CacheError("corrupt table cache: " + what);
  };
  std::string line;
  if (!std::getline(is, line) || line != kTableMagic) return fail("bad magic");
  if (!std::getline(is, line) || line != "n_max " + std::to_string(n_max)) return fail("n_max mismatch");
  if (!std::getline(is, line) || line != std::string("mode ") + to_string(mode)) return fail("mode mismatch");
  if (!std::getline(is, line) || line != "version " + std::to_string(kTableFormatVersion)) {
    return fail("version mismatch");
  }
  std::vector<std::string> rows;
  Fnv1a h;
  for (int n = 1; n <= n_max; ++n) {
    if (!std::getline(is, line)) return fail("truncated at row " + std::to_string(n));
    h.update(line);
    rows.push_back(line);
  }
  if (!std::getline(is, line) || line != "END " + h.hex()) return fail("checksum mismatch");
  return rows;
}

} // namespace detail

inline void write_table(std::ostream& os, const TraceTable& t) {
  detail::write_rows(os, t.n_max(), TableMode::exact, [&](int n) {
    std::string s;
    const auto row = t.row(n);
    for (int m = 1; m <= n; ++m) {
      if (m > 1) s += ' ';
      s += row[m].str();
    }
    return s;
  });
}

inline void write_table(std::ostream& os, const LogTraceTable& t) {
  detail::write_rows(os, t.n_max(), TableMode::logspace, [&](int n) {
    std::string s = detail::format_real(t.log_scale(n));
    const auto row = t.mantissas(n);
    for (int m = 1; m <= n; ++m) {
      s += ' ';
      s += detail::format_real(row[m]);
    }
    return s;
  });
}

inline TraceTable read_exact_table(std::istream& is, int n_max) {
  const auto rows = detail::read_rows(is, n_max, TableMode::exact);
  std::vector<BigCount> entries(TraceTable::offset(n_max + 1));
  entries[0] = 1;
  for (int n = 1; n <= n_max; ++n) {
    std::istringstream ls(rows[n - 1]);
    std::string tok;
    for (int m = 1; m <= n; ++m) {
      if (!(ls >> tok) || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw CacheError("corrupt table cache: bad entry in row " + std::to_string(n));
      }
      entries[TraceTable::offset(n) + m] = BigCount(tok);
    }
    if (ls >> tok) throw CacheError("corrupt table cache: extra entries in row " + std::to_string(n));
  }
  return TraceTable(n_max, std::move(entries));
}

inline LogTraceTable read_log_table(std::istream& is, int n_max) {
  const auto rows = detail::read_rows(is, n_max, TableMode::logspace);
  std::vector<double> scale(static_cast<std::size_t>(n_max) + 1, 0.0);
  std::vector<double> mant(TraceTable::offset(n_max + 1), 0.0);
  mant[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    std::istringstream ls(rows[n - 1]);
    if (!(ls >> scale[n])) throw CacheError("corrupt table cache: bad scale in row " + std::to_string(n));
    for (int m = 1; m <= n; ++m) {
      if (!(ls >> mant[TraceTable::offset(n) + m])) {
        throw CacheError("corrupt table cache: bad entry in row " + std::to_string(n));
      }
    }
  }
  return LogTraceTable(n_max, std::move(scale), std::move(mant));
}

/// CSV export `n,m,Q(m,n)` for 1 <= m <= n <= n_max.
inline void write_table_csv(std::ostream& os, const TraceTable& t) {
  os << "# planepart-format: 1\n" << "n,m,Q(m,n)\n";
  for (int n = 1; n <= t.n_max(); ++n) {
    const auto row = t.row(n);
    for (int m = 1; m <= n; ++m) os << n << ',' << m << ',' << row[m].str() << '\n';
  }
}

/// Directory-backed cache keyed on (n_max, mode, format version). A file
/// that fails validation is rebuilt and overwritten.
class TableCache {
public:
  explicit TableCache(std::filesystem::path dir, std::ostream* progress = nullptr)
      : dir_(std::move(dir)), progress_(progress) {}

  std::filesystem::path path_for(int n_max, TableMode mode) const {
    return dir_ / ("trace_" + std::string(to_string(mode)) + "_n" + std::to_string(n_max) + ".v" +
                   std::to_string(kTableFormatVersion) + ".ppt");
  }

  TraceTable exact(int n_max) {
    return load_or_build<TraceTable>(
        n_max, TableMode::exact, [&](std::istream& is) { return read_exact_table(is, n_max); },
        [&] { return build_trace_table(n_max); });
  }

  LogTraceTable logspace(int n_max, unsigned threads = 1) {
    return load_or_build<LogTraceTable>(
        n_max, TableMode::logspace, [&](std::istream& is) { return read_log_table(is, n_max); },
        [&] { return build_log_trace_table(n_max, threads); });
  }

  /// Whether the last lookup was served from disk.
  bool last_hit() const { return last_hit_; }

private:
  template <class Table, class Reader, class Builder>
  Table load_or_build(int n_max, TableMode mode, Reader&& read, Builder&& build) {
    const auto path = path_for(n_max, mode);
    last_hit_ = false;
    if (std::ifstream in(path); in) {
      try {
        Table t = read(in);
        last_hit_ = true;
        return t;
      } catch (const CacheError& e) {
        if (progress_) *progress_ << "planepart: " << e.what() << " (" << path.string() << "), rebuilding\n";
      }
    }
    if (progress_) {
      *progress_ << "planepart: building " << to_string(mode) << " trace table to n=" << n_max << "\n";
    }
    Table t = build();
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw CacheError("cannot create cache directory " + dir_.string() + ": " + ec.message());
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw CacheError("cannot write cache file " + tmp);
      write_table(out, t);
      if (!out) throw CacheError("write failed for cache file " + tmp);
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw CacheError("cannot move cache file into place: " + ec.message());
    return t;
  }

  std::filesystem::path dir_;
  std::ostream* progress_;
  bool last_hit_ = false;
};

} // namespace planepart
