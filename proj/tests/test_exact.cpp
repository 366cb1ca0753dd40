#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "planepart/exact.hpp"

using namespace planepart;

namespace {

// [u^m x^n] prod_{j<=N} (1 - u x^j)^{-j} by multiplying in one
// (1 - u x^j)^{-1} geometric series at a time on a dense 2-D array.
std::vector<std::vector<BigCount>> naive_bivariate(int N) {
  std::vector<std::vector<BigCount>> c(N + 1, std::vector<BigCount>(N + 1, 0));
  c[0][0] = 1;
  for (int j = 1; j <= N; ++j) {
    for (int copy = 0; copy < j; ++copy) {
      std::vector<std::vector<BigCount>> next(N + 1, std::vector<BigCount>(N + 1, 0));
      for (int n = 0; n <= N; ++n) {
        for (int m = 0; m <= n; ++m) {
          if (c[n][m] == 0) continue;
          for (int k = 0; n + k * j <= N; ++k) next[n + k * j][m + k] += c[n][m];
        }
      }
      c = std::move(next);
    }
  }
  return c;
}

// Univariate truncated product, one factor (1 - x^j)^{-1} at a time.
std::vector<BigCount> naive_univariate(int N) {
  std::vector<BigCount> c(N + 1, 0);
  c[0] = 1;
  for (int j = 1; j <= N; ++j) {
    for (int copy = 0; copy < j; ++copy) {
      for (int n = j; n <= N; ++n) c[n] += c[n - j];
    }
  }
  return c;
}

// Enumerates plane partitions of n directly: rows are partitions, each
// dominated entrywise by the row above. Returns trace -> count.
std::map<int, long> enumerate_plane_partitions(int n) {
  std::map<int, long> by_trace;
  std::vector<std::vector<int>> rows;
  std::function<void(std::vector<int>&, int)> extend;
  auto next_row = [&](int remaining) {
    if (remaining == 0) {
      int t = 0;
      for (std::size_t i = 0; i < rows.size() && i < rows[i].size(); ++i) t += rows[i][i];
      ++by_trace[t];
      return;
    }
    std::vector<int> row;
    extend(row, remaining);
  };
  // grows the current row one entry at a time; each prefix is a candidate row
  extend = [&](std::vector<int>& row, int remaining) {
    const std::size_t col = row.size();
    if (col > 0) {
      rows.push_back(row);
      next_row(remaining);
      rows.pop_back();
    }
    int cap = remaining;
    if (col > 0) cap = std::min(cap, row[col - 1]);
    if (!rows.empty()) cap = std::min(cap, col < rows.back().size() ? rows.back()[col] : 0);
    for (int v = 1; v <= cap; ++v) {
      row.push_back(v);
      extend(row, remaining - v);
      row.pop_back();
    }
  };
  next_row(n);
  return by_trace;
}

} // namespace

TEST(CountQ, SmallValues) {
  const auto q = count_q(10);
  const int expected[] = {1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500};
  for (int n = 0; n <= 10; ++n) EXPECT_EQ(q[n], expected[n]) << n;
  EXPECT_EQ(count_q(0), std::vector<BigCount>{1});
}

TEST(CountQ, MatchesTruncatedProduct) {
  const auto q = count_q(60);
  const auto oracle = naive_univariate(60);
  for (int n = 0; n <= 60; ++n) EXPECT_EQ(q[n], oracle[n]) << n;
}

TEST(CountQ, BruteForceEnumeration) {
  const auto q = count_q(6);
  for (int n = 1; n <= 6; ++n) {
    long total = 0;
    for (const auto& [t, c] : enumerate_plane_partitions(n)) total += c;
    EXPECT_EQ(q[n], total) << n;
  }
}

TEST(TraceTableTest, SmallRows) {
  const auto t = build_trace_table(3);
  EXPECT_EQ(t.at(1, 1), 1);
  EXPECT_EQ(t.at(2, 1), 2);
  EXPECT_EQ(t.at(2, 2), 1);
  EXPECT_EQ(t.at(3, 1), 3);
  EXPECT_EQ(t.at(3, 2), 2);
  EXPECT_EQ(t.at(3, 3), 1);
  EXPECT_EQ(t.row_sum(3), 6);
  EXPECT_EQ(t.at(3, 4), 0);
  EXPECT_EQ(t.at(3, 0), 0);
}

TEST(TraceTableTest, BruteForceTraceDistribution) {
  const auto t = build_trace_table(6);
  for (int n = 1; n <= 6; ++n) {
    const auto by_trace = enumerate_plane_partitions(n);
    for (int m = 1; m <= n; ++m) {
      const auto it = by_trace.find(m);
      EXPECT_EQ(t.at(n, m), it == by_trace.end() ? 0 : it->second) << n << "," << m;
    }
  }
}

TEST(TraceTableTest, NaiveBivariateOracle) {
  const int N = 12;
  const auto t = build_trace_table(N);
  const auto oracle = naive_bivariate(N);
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; m <= n; ++m) EXPECT_EQ(t.at(n, m), oracle[n][m]) << n << "," << m;
  }
}

TEST(TraceTableTest, IdentitiesTo200) {
  const int N = 200;
  const auto t = build_trace_table(N);
  const auto q = count_q(N);
  for (int n = 1; n <= N; ++n) {
    BigCount s = 0;
    for (int m = 1; m <= n; ++m) s += t.at(n, m);
    EXPECT_EQ(s, q[n]);
    EXPECT_EQ(t.row_sum(n), q[n]);
    EXPECT_EQ(t.at(n, 1), n);
    EXPECT_EQ(t.at(n, n), 1);
    EXPECT_EQ(t.at(n, 0), 0);
    if (n > 1) {
      EXPECT_GT(q[n], q[n - 1]);
    }
  }
}

TEST(TraceTableTest, Deterministic) {
  EXPECT_EQ(build_trace_table(80), build_trace_table(80));
}

TEST(TraceTableTest, Errors) {
  EXPECT_THROW(build_trace_table(0), RangeError);
  const auto t = build_trace_table(5);
  EXPECT_THROW(t.at(6, 1), RangeError);
  EXPECT_THROW(trace_pmf(t, 6, PmfMode::real), RangeError);
  EXPECT_THROW(trace_pmf(t, 0, PmfMode::real), RangeError);
}

TEST(Pmf, SmallRational) {
  const auto t = build_trace_table(3);
  const auto p1 = trace_pmf(t, 1, PmfMode::rational);
  EXPECT_EQ(p1.exact[0], Rational(1));
  const auto p2 = trace_pmf(t, 2, PmfMode::rational);
  EXPECT_EQ(p2.exact[0], Rational(2, 3));
  EXPECT_EQ(p2.exact[1], Rational(1, 3));
  const auto p3 = trace_pmf(t, 3, PmfMode::rational);
  EXPECT_EQ(p3.exact[0], Rational(1, 2));
  EXPECT_EQ(p3.exact[1], Rational(1, 3));
  EXPECT_EQ(p3.exact[2], Rational(1, 6));
}

TEST(Pmf, NormalizationBothModes) {
  const auto t = build_trace_table(120);
  for (int n : {10, 57, 120}) {
    const auto pr = trace_pmf(t, n, PmfMode::rational);
    Rational s = 0;
    for (const auto& p : pr.exact) s += p;
    EXPECT_EQ(s, Rational(1));
    const auto pd = trace_pmf(t, n, PmfMode::real);
    EXPECT_TRUE(pd.exact.empty());
    double sd = 0.0;
    for (double p : pd.probs) {
      EXPECT_GE(p, 0.0);
      sd += p;
    }
    EXPECT_NEAR(sd, 1.0, 1e-12);
  }
}

TEST(Moments, HandComputed) {
  const auto t = build_trace_table(3);
  auto m1 = trace_moments(trace_pmf(t, 1, PmfMode::rational));
  EXPECT_DOUBLE_EQ(m1.mean, 1.0);
  EXPECT_DOUBLE_EQ(m1.variance, 0.0);
  auto m2 = trace_moments(trace_pmf(t, 2, PmfMode::rational));
  EXPECT_DOUBLE_EQ(m2.mean, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(m2.variance, 2.0 / 9.0);
  auto m3 = trace_moments(trace_pmf(t, 3, PmfMode::real));
  EXPECT_NEAR(m3.mean, 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(m3.variance, 5.0 / 9.0, 1e-15);
}

TEST(Moments, RealAndRationalAgree) {
  const auto t = build_trace_table(150);
  const auto a = trace_moments(trace_pmf(t, 150, PmfMode::rational));
  const auto b = trace_moments(trace_pmf(t, 150, PmfMode::real));
  EXPECT_NEAR(a.mean, b.mean, 1e-10 * a.mean);
  EXPECT_NEAR(a.variance, b.variance, 1e-8 * a.variance);
  EXPECT_GE(a.variance, 0.0);
}

TEST(CharacteristicFunction, Values) {
  const auto t = build_trace_table(40);
  const auto p2 = trace_pmf(t, 2, PmfMode::real);
  const Complex one = trace_cf(p2, 0.0);
  EXPECT_NEAR(one.real(), 1.0, 1e-15);
  EXPECT_NEAR(one.imag(), 0.0, 1e-15);
  const Complex at_pi = trace_cf(p2, std::numbers::pi);
  EXPECT_NEAR(at_pi.real(), -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(at_pi.imag(), 0.0, 1e-15);
  const auto p40 = trace_pmf(t, 40, PmfMode::real);
  for (double s : {0.1, 0.9, 2.5, -1.3}) {
    const Complex a = trace_cf(p40, s);
    const Complex b = trace_cf(p40, -s);
    EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-14);
    EXPECT_LE(std::abs(a), 1.0 + 1e-12);
  }
}
