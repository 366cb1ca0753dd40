#pragma once

// Exact enumeration of plane partitions by size and trace.
//
// Q(n) is the coefficient of x^n in prod_j (1 - x^j)^{-j} and Q(m,n) the
// coefficient of u^m x^n in prod_j (1 - u x^j)^{-j}. The trace of a uniform
// plane partition of n has law P(trace = m) = Q(m,n) / Q(n).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "planepart/errors.hpp"
#include "planepart/special.hpp"

namespace planepart {

using BigCount = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Q(0..n_max) via n Q(n) = sum_{k=1..n} sigma_2(k) Q(n-k), with Q(0) = 1.
inline std::vector<BigCount> count_q(int n_max) {
  if (n_max < 0) throw RangeError("count_q: n_max must be >= 0");
  const auto size = static_cast<std::size_t>(n_max) + 1;
  std::vector<std::uint64_t> sigma2(size, 0);
  for (std::uint64_t d = 1; d < size; ++d) {
    for (std::uint64_t k = d; k < size; k += d) sigma2[k] += d * d;
  }
  std::vector<BigCount> q(size);
  q[0] = 1;
  for (std::size_t n = 1; n < size; ++n) {
    BigCount acc = 0;
    for (std::size_t k = 1; k <= n; ++k) acc += q[n - k] * sigma2[k];
    q[n] = acc / n;
  }
  return q;
}

/// Triangular table of Q(m,n) for 0 <= m <= n <= n_max, rows contiguous.
/// Q(0,0) = 1 and Q(0,n) = 0 for n >= 1.
class TraceTable {
public:
  TraceTable() = default;
  TraceTable(int n_max, std::vector<BigCount> entries) : n_max_(n_max), entries_(std::move(entries)) {
    if (n_max_ < 0 || entries_.size() != offset(n_max_ + 1)) {
      throw RangeError("TraceTable: entry count does not match n_max");
    }
    row_sums_.resize(static_cast<std::size_t>(n_max_) + 1);
    for (int n = 0; n <= n_max_; ++n) {
      BigCount s = 0;
      for (const auto& v : row(n)) s += v;
      row_sums_[n] = s;
    }
  }

  int n_max() const { return n_max_; }

  /// Q(m,n); zero outside 0 <= m <= n.
  BigCount at(int n, int m) const {
    check_row(n);
    if (m < 0 || m > n) return 0;
    return entries_[offset(n) + m];
  }

  /// Entries Q(0..n, n).
  std::span<const BigCount> row(int n) const {
    check_row(n);
    return {entries_.data() + offset(n), static_cast<std::size_t>(n) + 1};
  }

  /// Q(n) = sum_m Q(m,n).
  const BigCount& row_sum(int n) const {
    check_row(n);
    return row_sums_[n];
  }

  bool operator==(const TraceTable& other) const {
    return n_max_ == other.n_max_ && entries_ == other.entries_;
  }

  static std::size_t offset(int n) {
    const auto u = static_cast<std::size_t>(n);
    return u * (u + 1) / 2;
  }

private:
  void check_row(int n) const {
    if (n < 0 || n > n_max_) {
      throw RangeError("TraceTable: row " + std::to_string(n) + " outside 0.." + std::to_string(n_max_));
    }
  }

  int n_max_ = -1;
  std::vector<BigCount> entries_;
  std::vector<BigCount> row_sums_;
};

namespace detail {

// Fixed-width little-endian limb arithmetic for the table DP. Every partial
// coefficient is bounded by Q(n_max), so the width chosen from that bound
// never overflows.
class LimbTable {
public:
  LimbTable(int n_max, std::size_t limbs)
      : n_max_(n_max), limbs_(limbs), data_(TraceTable::offset(n_max + 1) * limbs, 0) {}

  std::uint64_t* at(int n, int m) { return data_.data() + (TraceTable::offset(n) + m) * limbs_; }
  const std::uint64_t* at(int n, int m) const {
    return data_.data() + (TraceTable::offset(n) + m) * limbs_;
  }
  std::size_t limbs() const { return limbs_; }
  int n_max() const { return n_max_; }

private:
  int n_max_;
  std::size_t limbs_;
  std::vector<std::uint64_t> data_;
};

inline void limb_add(std::uint64_t* acc, const std::uint64_t* src, std::size_t limbs) {
  unsigned __int128 carry = 0;
  for (std::size_t i = 0; i < limbs; ++i) {
    carry += static_cast<unsigned __int128>(acc[i]) + src[i];
    acc[i] = static_cast<std::uint64_t>(carry);
    carry >>= 64;
  }
}

inline void limb_add_mul(std::uint64_t* acc, const std::uint64_t* src, std::uint64_t w,
                         std::size_t limbs) {
  unsigned __int128 carry = 0;
  for (std::size_t i = 0; i < limbs; ++i) {
    carry += static_cast<unsigned __int128>(src[i]) * w + acc[i];
    acc[i] = static_cast<std::uint64_t>(carry);
    carry >>= 64;
  }
}

// Weights C(j+k-1, k) for k = 0..k_max; empty if one exceeds 64 bits.
inline std::vector<std::uint64_t> negative_binomial_weights(int j, int k_max) {
  std::vector<std::uint64_t> w(static_cast<std::size_t>(k_max) + 1);
  unsigned __int128 c = 1;
  w[0] = 1;
  for (int k = 1; k <= k_max; ++k) {
    c = c * static_cast<unsigned>(j + k - 1);
    c /= static_cast<unsigned>(k);
    if (c >> 64) return {};
    w[k] = static_cast<std::uint64_t>(c);
  }
  return w;
}

// Multiply the table by (1 - u x^j)^{-j} in place.
inline void apply_factor(LimbTable& t, int j) {
  const int n_max = t.n_max();
  const std::size_t limbs = t.limbs();
  const auto weights = negative_binomial_weights(j, n_max / j);
  if (!weights.empty()) {
    // q'[n][m] = sum_k C(j+k-1,k) q[n-kj][m-k]; rows below n are still old.
    for (int n = n_max; n >= j; --n) {
      const int k_max = n / j;
      for (int m = 1; m <= n; ++m) {
        std::uint64_t* dst = t.at(n, m);
        const int k_top = std::min(k_max, m);
        for (int k = 1; k <= k_top; ++k) {
          const int src_n = n - k * j;
          const int src_m = m - k;
          if (src_m > src_n) continue;
          limb_add_mul(dst, t.at(src_n, src_m), weights[k], limbs);
        }
      }
    }
    return;
  }
  // j passes of q[n][m] += q[n-j][m-1], each one factor (1 - u x^j)^{-1}.
  for (int pass = 0; pass < j; ++pass) {
    for (int n = j; n <= n_max; ++n) {
      const int src_n = n - j;
      for (int m = 1; m <= src_n + 1; ++m) limb_add(t.at(n, m), t.at(src_n, m - 1), limbs);
    }
  }
}

} // namespace detail

/// Q(m,n) for all 0 <= m <= n <= n_max by multiplying in the factors
/// (1 - u x^j)^{-j}, j = 1..n_max, one at a time.
inline TraceTable build_trace_table(int n_max) {
  if (n_max < 1) throw RangeError("build_trace_table: n_max must be >= 1");
  const auto totals = count_q(n_max);
  const std::size_t bits = boost::multiprecision::msb(totals.back()) + 1;
  const std::size_t limbs = bits / 64 + 1;

  detail::LimbTable limb_table(n_max, limbs);
  limb_table.at(0, 0)[0] = 1;
  for (int j = 1; j <= n_max; ++j) detail::apply_factor(limb_table, j);

  std::vector<BigCount> entries(TraceTable::offset(n_max + 1));
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n; ++m) {
      const std::uint64_t* p = limb_table.at(n, m);
      BigCount v;
      boost::multiprecision::import_bits(v, p, p + limbs, 64, false);
      entries[TraceTable::offset(n) + m] = std::move(v);
    }
  }
  return TraceTable(n_max, std::move(entries));
}

enum class PmfMode { rational, real };

/// P(trace = m) for m = 1..n. `probs` is always filled; `exact` only in
/// rational mode.
struct TracePmf {
  int n = 0;
  PmfMode mode = PmfMode::real;
  std::vector<double> probs;   // probs[m-1]
  std::vector<Rational> exact; // exact[m-1], rational mode only

  double prob(int m) const {
    if (m < 1 || m > n) return 0.0;
    return probs[static_cast<std::size_t>(m) - 1];
  }
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline TracePmf trace_pmf(const TraceTable& table, int n, PmfMode mode) {
  if (n < 1 || n > table.n_max()) {
    throw RangeError("trace_pmf: n=" + std::to_string(n) + " outside 1.." + std::to_string(table.n_max()));
  }
  TracePmf pmf;
  pmf.n = n;
  pmf.mode = mode;
  const BigCount& total = table.row_sum(n);
  const auto row = table.row(n);
  pmf.probs.reserve(static_cast<std::size_t>(n));
  if (mode == PmfMode::rational) pmf.exact.reserve(static_cast<std::size_t>(n));
  for (int m = 1; m <= n; ++m) {
    Rational p(row[m], total);
    pmf.probs.push_back(to_double(p));
    if (mode == PmfMode::rational) pmf.exact.push_back(std::move(p));
  }
  return pmf;
}

struct TraceMoments {
  double mean = 0.0;
  double variance = 0.0;
};

inline TraceMoments trace_moments(const TracePmf& pmf) {
  if (pmf.mode == PmfMode::rational && !pmf.exact.empty()) {
    Rational s1 = 0, s2 = 0;
    for (int m = 1; m <= pmf.n; ++m) {
      const Rational& p = pmf.exact[m - 1];
      s1 += p * m;
      s2 += p * m * m;
    }
    return {to_double(s1), to_double(s2 - s1 * s1)};
  }
  // Shifted by the mean to keep the variance free of cancellation.
  double mean = 0.0;
  for (int m = 1; m <= pmf.n; ++m) mean += m * pmf.prob(m);
  double var = 0.0;
  for (int m = 1; m <= pmf.n; ++m) {
    const double d = m - mean;
    var += d * d * pmf.prob(m);
  }
  return {mean, std::max(var, 0.0)};
}

/// phi_n(e^{it}) = sum_m p[m] e^{imt}.
inline Complex trace_cf(const TracePmf& pmf, double t) {
  Complex acc{0.0, 0.0};
  for (int m = pmf.n; m >= 1; --m) acc += pmf.prob(m) * std::polar(1.0, m * t);
  return acc;
}

} // namespace planepart
