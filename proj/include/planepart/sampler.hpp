#pragma once

// Random generation for the (size, trace) law.
//
// Under the Boltzmann measure for prod_j (1 - u x^j)^{-j}, each of the j
// colors of part size j carries an independent geometric count with
// P(count = k) = (u x^j)^k (1 - u x^j). Conditioning the total size on n
// gives the uniform law, so the number of parts is distributed as the trace
// of a uniform plane partition of n.
//
// Streams: std::mt19937_64 seeded with stream_seed(base, index); doubles in
// (0,1) are ((w >> 11) + 0.5) * 2^-53 for a raw 64-bit output w.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "planepart/errors.hpp"
#include "planepart/exact.hpp"
#include "planepart/parallel.hpp"

namespace planepart {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of stream `index` derived from a base seed.
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base + 0x9E3779B97F4A7C15ull * (index + 1));
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0,1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  /// Number of failures before the first success, P(G = k) = q^k (1-q),
  /// given log_q = log q.
  long geometric(double log_q) {
    if (log_q == -std::numeric_limits<double>::infinity()) return 0;
    return static_cast<long>(std::floor(std::log(uniform()) / log_q));
  }

private:
  std::mt19937_64 engine_;
};

struct SamplerConfig {
  double x = 0.5;
  double u = 1.0;
  std::uint64_t seed = 0;
  long max_attempts = 1'000'000;

  void validate() const {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("SamplerConfig: need 0 < x < 1");
    if (!(u > 0.0 && u <= 1.0)) throw DomainError("SamplerConfig: need 0 < u <= 1");
    if (max_attempts < 1) throw DomainError("SamplerConfig: max_attempts must be positive");
  }
};

struct ColoredPartsSample {
  /// (part size j, color c in 1..j) -> count
  std::map<std::pair<int, int>, long> multiplicities;
  long size = 0;
  long parts = 0;

  bool consistent() const {
    long s = 0, p = 0;
    for (const auto& [key, count] : multiplicities) {
      if (key.second < 1 || key.second > key.first || count < 1) return false;
      s += static_cast<long>(key.first) * count;
      p += count;
    }
    return s == size && p == parts;
  }

  bool operator==(const ColoredPartsSample&) const = default;
};

/// Boltzmann sampler with precomputed per-size constants. Part sizes run to
/// J = ceil(60 / -log x) (+ extra_sizes).
class BoltzmannSampler {
public:
  explicit BoltzmannSampler(const SamplerConfig& cfg, int extra_sizes = 0) : cfg_(cfg) {
    cfg_.validate();
    max_part_ = static_cast<int>(std::ceil(60.0 / -std::log(cfg_.x))) + extra_sizes;
    sizes_.reserve(static_cast<std::size_t>(max_part_));
    const double log_x = std::log(cfg_.x);
    const double log_u = std::log(cfg_.u);
    for (int j = 1; j <= max_part_; ++j) {
      SizeTerm t;
      t.log_q = log_u + j * log_x;
      const double q = std::exp(t.log_q);
      t.log_1mq = std::log1p(-q);
      t.p_all_zero = std::exp(j * t.log_1mq);
      t.p_any = -std::expm1(j * t.log_1mq);
      sizes_.push_back(t);
    }
  }

  int max_part() const { return max_part_; }
  const SamplerConfig& config() const { return cfg_; }

  /// Draws into `out`. Returns false as soon as the size exceeds size_limit.
  bool draw(Rng& rng, ColoredPartsSample& out,
            long size_limit = std::numeric_limits<long>::max()) const {
    out = {};
    for (int j = 1; j <= max_part_; ++j) {
      const SizeTerm& t = sizes_[j - 1];
      if (rng.uniform() < t.p_all_zero) continue;
      // First nonzero color, conditioned on being among the j colors.
      const double v = rng.uniform();
      long color = static_cast<long>(std::floor(std::log1p(-v * t.p_any) / t.log_1mq));
      if (color > j - 1) color = j - 1;
      while (color < j) {
        const long count = 1 + rng.geometric(t.log_q);
        out.multiplicities[{j, static_cast<int>(color) + 1}] += count;
        out.size += static_cast<long>(j) * count;
        out.parts += count;
        if (out.size > size_limit) return false;
        color += 1 + rng.geometric(t.log_1mq);
      }
    }
    return true;
  }

  ColoredPartsSample draw(Rng& rng) const {
    ColoredPartsSample s;
    draw(rng, s);
    return s;
  }

  /// Rejection to size exactly n.
  ColoredPartsSample draw_exact(Rng& rng, long n) const {
    ColoredPartsSample s;
    for (long attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
      if (draw(rng, s, n) && s.size == n) return s;
    }
    throw NumericError("sample_exact_n: rejection budget of " + std::to_string(cfg_.max_attempts) +
                       " attempts exhausted at n=" + std::to_string(n));
  }

private:
  struct SizeTerm {
    double log_q = 0.0;
    double log_1mq = 0.0;
    double p_all_zero = 1.0;
    double p_any = 0.0;
  };

  SamplerConfig cfg_;
  int max_part_ = 0;
  std::vector<SizeTerm> sizes_;
};

inline ColoredPartsSample boltzmann_sample(const SamplerConfig& cfg) {
  Rng rng(cfg.seed);
  return BoltzmannSampler(cfg).draw(rng);
}

inline ColoredPartsSample sample_exact_n(const SamplerConfig& cfg, long n) {
  if (n < 1) throw RangeError("sample_exact_n: need n >= 1");
  Rng rng(cfg.seed);
  return BoltzmannSampler(cfg).draw_exact(rng, n);
}

/// `count` samples; sample i uses the stream stream_seed(cfg.seed, i).
inline std::vector<ColoredPartsSample> boltzmann_batch(const SamplerConfig& cfg, std::size_t count,
                                                       unsigned threads = 1, int extra_sizes = 0) {
  const BoltzmannSampler sampler(cfg, extra_sizes);
  std::vector<ColoredPartsSample> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    Rng rng(stream_seed(cfg.seed, i));
    sampler.draw(rng, out[i]);
  });
  return out;
}

/// `count` exact-size samples; sample i rejects within stream stream_seed(cfg.seed, i).
inline std::vector<ColoredPartsSample> exact_size_batch(const SamplerConfig& cfg, long n, std::size_t count,
                                                        unsigned threads = 1) {
  if (n < 1) throw RangeError("exact_size_batch: need n >= 1");
  const BoltzmannSampler sampler(cfg);
  std::vector<ColoredPartsSample> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    Rng rng(stream_seed(cfg.seed, i));
    out[i] = sampler.draw_exact(rng, n);
  });
  return out;
}

/// Inverse-CDF draws of the trace from an exact table row, in integer
/// arithmetic: U uniform on [0, Q(n)), return the least m with
/// Q(1,n) + ... + Q(m,n) > U.
class ExactTraceSampler {
public:
  ExactTraceSampler(const TraceTable& table, int n) : n_(n) {
    if (n < 1 || n > table.n_max()) {
      throw RangeError("exact_uniform_sample: n=" + std::to_string(n) + " outside 1.." +
                       std::to_string(table.n_max()));
    }
    const auto row = table.row(n);
    BigCount acc = 0;
    for (int m = 1; m <= n; ++m) {
      acc += row[m];
      cumulative_.push_back(acc);
    }
    total_ = acc;
    bits_ = boost::multiprecision::msb(total_) + 1;
  }

  int n() const { return n_; }

  int draw(Rng& rng) const {
    const BigCount u = uniform_below(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<int>(it - cumulative_.begin()) + 1;
  }

private:
  BigCount uniform_below(Rng& rng) const {
    const std::size_t limbs = (bits_ + 63) / 64;
    const std::size_t top_bits = bits_ - 64 * (limbs - 1);
    const std::uint64_t top_mask = top_bits == 64 ? ~0ull : ((1ull << top_bits) - 1);
    std::vector<std::uint64_t> words(limbs);
    for (;;) {
      for (auto& w : words) w = rng.next();
      words.back() &= top_mask;
      BigCount v;
      boost::multiprecision::import_bits(v, words.begin(), words.end(), 64, false);
      if (v < total_) return v;
    }
  }

  int n_;
  std::vector<BigCount> cumulative_;
  BigCount total_;
  std::size_t bits_ = 0;
};

inline int exact_uniform_sample(const TraceTable& table, int n, std::uint64_t seed) {
  Rng rng(seed);
  return ExactTraceSampler(table, n).draw(rng);
}

/// `count` successive draws from one stream seeded with `seed`.
inline std::vector<int> exact_uniform_batch(const TraceTable& table, int n, std::size_t count, std::uint64_t seed) {
  const ExactTraceSampler sampler(table, n);
  Rng rng(seed);
  std::vector<int> out(count);
  for (auto& v : out) v = sampler.draw(rng);
  return out;
}

} // namespace planepart
