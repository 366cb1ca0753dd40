#pragma once

// Floating-point trace table for sizes beyond the exact regime.
//
// Row n is stored as log_scale[n] plus mantissas with max 1, so
// log Q(m,n) = log_scale[n] + log(mantissa). Rows are built with the
// u-derivative recurrence
//
//   n Q(m,n) = sum_{l >= 1} sum_{j >= 1, jl <= n} j^2 Q(m-l, n-jl),
//
// which has only nonnegative terms. Each source row enters with the factor
// exp(log_scale[src] - log_scale[n-1]), i.e. log-sum-exp with a per-row shift.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "planepart/errors.hpp"
#include "planepart/exact.hpp"

namespace planepart {

class LogTraceTable {
public:
  LogTraceTable() = default;
  LogTraceTable(int n_max, std::vector<double> log_scale, std::vector<double> mantissa)
      : n_max_(n_max), log_scale_(std::move(log_scale)), mantissa_(std::move(mantissa)) {
    if (n_max_ < 0 || log_scale_.size() != static_cast<std::size_t>(n_max_) + 1 ||
        mantissa_.size() != TraceTable::offset(n_max_ + 1)) {
      throw RangeError("LogTraceTable: storage does not match n_max");
    }
  }

  int n_max() const { return n_max_; }

  /// log Q(m,n); -inf for zero entries.
  double log_q(int n, int m) const {
    check_row(n);
    if (m < 0 || m > n) return -std::numeric_limits<double>::infinity();
    const double v = mantissa_[TraceTable::offset(n) + m];
    return v > 0.0 ? log_scale_[n] + std::log(v) : -std::numeric_limits<double>::infinity();
  }

  /// log Q(n).
  double log_row_sum(int n) const {
    check_row(n);
    double s = 0.0;
    for (int m = 0; m <= n; ++m) s += mantissa_[TraceTable::offset(n) + m];
    return log_scale_[n] + std::log(s);
  }

  std::span<const double> mantissas(int n) const {
    check_row(n);
    return {mantissa_.data() + TraceTable::offset(n), static_cast<std::size_t>(n) + 1};
  }
  double log_scale(int n) const {
    check_row(n);
    return log_scale_[n];
  }

private:
  void check_row(int n) const {
    if (n < 0 || n > n_max_) {
      throw RangeError("LogTraceTable: row " + std::to_string(n) + " outside 0.." + std::to_string(n_max_));
    }
  }

  int n_max_ = -1;
  std::vector<double> log_scale_;
  std::vector<double> mantissa_;
};

namespace detail {

struct SourceTerm {
  int shift;      // l: the u-power carried by the term
  int src_row;    // n - j l
  double weight;  // j^2
};

} // namespace detail

inline LogTraceTable build_log_trace_table(int n_max, unsigned threads = 1) {
  if (n_max < 1) throw RangeError("build_log_trace_table: n_max must be >= 1");
  threads = std::max(1u, threads);
  std::vector<double> log_scale(static_cast<std::size_t>(n_max) + 1, 0.0);
  std::vector<double> mant(TraceTable::offset(n_max + 1), 0.0);
  mant[0] = 1.0;

  std::vector<double> acc;
  std::vector<detail::SourceTerm> terms;
  for (int n = 1; n <= n_max; ++n) {
    const double ref = log_scale[n - 1];
    terms.clear();
    for (int l = 1; l <= n; ++l) {
      for (int j = 1; j * l <= n; ++j) {
        terms.push_back({l, n - j * l, static_cast<double>(j) * j});
      }
    }
    acc.assign(static_cast<std::size_t>(n) + 1, 0.0);

    auto accumulate = [&](int m_lo, int m_hi) {
      for (const auto& t : terms) {
        const double factor = t.weight * std::exp(log_scale[t.src_row] - ref);
        if (factor < 1e-280) continue;
        const double* src = mant.data() + TraceTable::offset(t.src_row);
        // target m receives src[m - l] for 0 <= m - l <= src_row
        const int lo = std::max(m_lo, t.shift);
        const int hi = std::min(m_hi, t.shift + t.src_row);
        for (int m = lo; m <= hi; ++m) acc[m] += factor * src[m - t.shift];
      }
    };

    const unsigned workers = (n < 512) ? 1u : threads;
    if (workers == 1) {
      accumulate(1, n);
    } else {
      std::vector<std::jthread> pool;
      const int chunk = (n + static_cast<int>(workers) - 1) / static_cast<int>(workers);
      for (unsigned w = 0; w < workers; ++w) {
        const int lo = 1 + static_cast<int>(w) * chunk;
        const int hi = std::min(n, lo + chunk - 1);
        if (lo > hi) break;
        pool.emplace_back([&, lo, hi] { accumulate(lo, hi); });
      }
    }

    double peak = 0.0;
    for (int m = 1; m <= n; ++m) peak = std::max(peak, acc[m]);
    if (!(peak > 0.0) || !std::isfinite(peak)) {
      throw NumericError("build_log_trace_table: row " + std::to_string(n) + " degenerate");
    }
    double* dst = mant.data() + TraceTable::offset(n);
    for (int m = 1; m <= n; ++m) {
      const double v = acc[m] / peak;
      dst[m] = v < 1e-300 ? 0.0 : v;
    }
    log_scale[n] = ref + std::log(peak / n);
  }
  return LogTraceTable(n_max, std::move(log_scale), std::move(mant));
}

/// Real-mode pmf from the floating table.
inline TracePmf trace_pmf(const LogTraceTable& table, int n) {
  if (n < 1 || n > table.n_max()) {
    throw RangeError("trace_pmf: n=" + std::to_string(n) + " outside 1.." + std::to_string(table.n_max()));
  }
  const auto row = table.mantissas(n);
  double total = 0.0;
  for (int m = 1; m <= n; ++m) total += row[m];
  TracePmf pmf;
  pmf.n = n;
  pmf.mode = PmfMode::real;
  pmf.probs.reserve(static_cast<std::size_t>(n));
  for (int m = 1; m <= n; ++m) pmf.probs.push_back(row[m] / total);
  return pmf;
}

} // namespace planepart
