#pragma once

// Gaussian limit of the trace: normalization by c0 n^{2/3} and
// c1 n^{1/3} log^{1/2} n, Kolmogorov-Smirnov distance to N(0,1), the
// normalized characteristic function, and tilted-model moment predictions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "planepart/asympt.hpp"
#include "planepart/errors.hpp"
#include "planepart/exact.hpp"
#include "planepart/special.hpp"

namespace planepart {

struct CltConstants {
  double c0 = 0.0; // zeta(2) / [2 zeta(3)]^{2/3}
  double c1 = 0.0; // sqrt(1/3) / [2 zeta(3)]^{1/3}
};

inline CltConstants clt_constants() {
  const double a = std::cbrt(2.0 * zeta(3.0));
  return {zeta(2.0) / (a * a), std::sqrt(1.0 / 3.0) / a};
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Center c0 n^{2/3} and scale c1 n^{1/3} sqrt(log n) of the trace.
struct Normalization {
  double center = 0.0;
  double scale = 0.0;
};

inline Normalization trace_normalization(int n) {
  if (n < 2) throw RangeError("trace_normalization: need n >= 2");
  const auto k = clt_constants();
  const double nd = n;
  return {k.c0 * std::pow(nd, 2.0 / 3.0), k.c1 * std::cbrt(nd) * std::sqrt(std::log(nd))};
}

struct NormalizedGrid {
  int n = 0;
  Normalization norm;
  // one entry per atom m = 1..n
  std::vector<double> atom_z;
  std::vector<double> atom_mass;
  std::vector<double> atom_cdf; // right-continuous CDF at the atom
  // [-4, 4] at step 0.05 merged with the atom positions, ascending
  std::vector<double> z_values;
  std::vector<double> cdf_exact;
  std::vector<double> cdf_normal;
};

inline NormalizedGrid normalize(const TracePmf& pmf) {
  if (pmf.n < 2) throw RangeError("normalize: need n >= 2");
  NormalizedGrid g;
  g.n = pmf.n;
  g.norm = trace_normalization(pmf.n);
  double cum = 0.0;
  for (int m = 1; m <= pmf.n; ++m) {
    const double p = pmf.prob(m);
    cum += p;
    g.atom_z.push_back((m - g.norm.center) / g.norm.scale);
    g.atom_mass.push_back(p);
    g.atom_cdf.push_back(std::min(cum, 1.0));
  }
  std::vector<double> zs = g.atom_z;
  for (int i = -80; i <= 80; ++i) zs.push_back(0.05 * i);
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  g.z_values = zs;
  std::size_t atom = 0;
  double level = 0.0;
  for (double z : zs) {
    while (atom < g.atom_z.size() && g.atom_z[atom] <= z) level = g.atom_cdf[atom++];
    g.cdf_exact.push_back(level);
    g.cdf_normal.push_back(normal_cdf(z));
  }
  return g;
}

/// sup_z |F_exact(z) - Phi(z)|, attained at an atom from one side.
inline double ks_distance(const NormalizedGrid& g) {
  double d = 0.0;
  for (std::size_t i = 0; i < g.atom_z.size(); ++i) {
    const double phi = normal_cdf(g.atom_z[i]);
    const double right = g.atom_cdf[i];
    const double left = (i == 0) ? 0.0 : g.atom_cdf[i - 1];
    d = std::max({d, std::abs(right - phi), std::abs(left - phi)});
  }
  return std::min(d, 1.0);
}

/// Phi_n(w) = E exp(i w (trace - c0 n^{2/3}) / (c1 n^{1/3} log^{1/2} n)).
inline Complex normalized_cf(const TracePmf& pmf, double w) {
  const auto norm = trace_normalization(pmf.n);
  Complex acc{0.0, 0.0};
  for (int m = pmf.n; m >= 1; --m) {
    acc += pmf.prob(m) * std::polar(1.0, w * (m - norm.center) / norm.scale);
  }
  return acc;
}

/// max over the grid of |Phi_n(w) - e^{-w^2/2}|.
inline double cf_check(const TracePmf& pmf, const std::vector<double>& w_grid) {
  if (pmf.n < 2) throw RangeError("cf_check: need n >= 2");
  double worst = 0.0;
  for (double w : w_grid) {
    if (!std::isfinite(w)) throw DomainError("cf_check: non-finite w");
    worst = std::max(worst, std::abs(normalized_cf(pmf, w) - std::exp(-0.5 * w * w)));
  }
  return worst;
}

/// w in [-3, 3] at step 0.05.
inline std::vector<double> default_w_grid() {
  std::vector<double> w;
  for (int i = -60; i <= 60; ++i) w.push_back(0.05 * i);
  return w;
}

struct MomentPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Parts count of the tilted colored-parts model at x = r:
/// mean = sum_j j r^j/(1-r^j), variance = sum_j j r^{2j}/(1-r^j)^2 + mean.
inline MomentPrediction moment_prediction(const SaddleSolution& s) {
  if (!(s.r > 0.0 && s.r < 1.0)) throw DomainError("moment_prediction: need 0 < r < 1");
  const long terms = detail::series_cutoff(s.y);
  double mean = 0.0, second = 0.0;
  for (long j = terms; j >= 1; --j) {
    const double rj = std::exp(-j * s.y);
    const double den = -std::expm1(-j * s.y);
    mean += j * rj / den;
    second += j * rj * rj / (den * den);
  }
  return {mean, second + mean};
}

struct CltReport {
  int n = 0;
  double exact_mean = 0.0;
  double exact_var = 0.0;
  double mean_ratio = 0.0; // exact_mean / (c0 n^{2/3})
  double var_ratio = 0.0;  // exact_var / (c1^2 n^{2/3} log n)
  double ks_distance = 0.0;
  double cf_error = 0.0;
};

inline CltReport clt_report(const TracePmf& pmf, const std::vector<double>& w_grid = default_w_grid()) {
  const auto k = clt_constants();
  const double nd = pmf.n;
  const auto mom = trace_moments(pmf);
  CltReport rep;
  rep.n = pmf.n;
  rep.exact_mean = mom.mean;
  rep.exact_var = mom.variance;
  rep.mean_ratio = mom.mean / (k.c0 * std::pow(nd, 2.0 / 3.0));
  rep.var_ratio = mom.variance / (k.c1 * k.c1 * std::pow(nd, 2.0 / 3.0) * std::log(nd));
  rep.ks_distance = ks_distance(normalize(pmf));
  rep.cf_error = cf_check(pmf, w_grid);
  return rep;
}

} // namespace planepart
