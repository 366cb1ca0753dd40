#pragma once

// Analytic side: log G(u,x) on the unit disk, the saddle point of
// G(1,x) x^{-n}, and the Wright / Hayman / Meinardus estimates of Q(n).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "planepart/errors.hpp"
#include "planepart/special.hpp"

namespace planepart {

namespace detail {

// e^w - 1 for complex w, stable for small |w|.
inline Complex expm1(Complex w) {
  const double a = w.real();
  const double b = w.imag();
  const double em1 = std::expm1(a);
  const double s = std::sin(0.5 * b);
  return {em1 * std::cos(b) - 2.0 * s * s, (em1 + 1.0) * std::sin(b)};
}

// Number of terms after which e^{-j y} < e^{-60}.
inline long series_cutoff(double y) {
  return static_cast<long>(std::ceil(60.0 / y));
}

constexpr long kMaxSeriesTerms = 400'000'000;

} // namespace detail

/// log G(u,x) = -sum_j j log(1 - u x^j) = sum_{l>=1} (u^l/l) x^l/(1-x^l)^2,
/// for |x| < 1 and |u| <= 1. Summation stops once the bound on the
/// remaining terms drops below 1e-16 (1-|x|)^2.
inline Complex log_g(Complex u, Complex x) {
  const double ax = std::abs(x);
  if (!(ax < 1.0)) throw DomainError("log_g: need |x| < 1");
  if (std::abs(u) > 1.0 + 1e-12) throw DomainError("log_g: need |u| <= 1");
  if (ax == 0.0 || u == Complex(0.0, 0.0)) return {0.0, 0.0};
  const Complex w = std::log(x); // Re w = log|x| < 0
  const double stop = 1e-16 * (1.0 - ax) * (1.0 - ax);
  Complex sum{0.0, 0.0};
  Complex u_pow{1.0, 0.0};
  for (long l = 1; l <= detail::kMaxSeriesTerms; ++l) {
    u_pow *= u;
    const Complex lw = static_cast<double>(l) * w;
    const Complex xl = std::exp(lw);
    const Complex one_minus = -detail::expm1(lw);
    const Complex term = u_pow * xl / (one_minus * one_minus * static_cast<double>(l));
    sum += term;
    // |term| <= |x|^l / (l (1 - |x|^l)^2), which decreases in l
    const double axl = std::exp(static_cast<double>(l) * w.real());
    const double gap = -std::expm1(static_cast<double>(l) * w.real());
    if (axl / (gap * gap * static_cast<double>(l)) < stop) return sum;
  }
  throw NumericError("log_g: series did not converge within the term budget");
}

inline Complex log_g(double u, double x) { return log_g(Complex(u, 0.0), Complex(x, 0.0)); }

/// r G'(1,r)/G(1,r) = sum_j j^2 r^j/(1 - r^j): the saddle objective.
inline double saddle_objective(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("saddle_objective: need 0 < r < 1");
  const double y = -std::log(r);
  const long terms = detail::series_cutoff(y);
  double sum = 0.0;
  for (long j = terms; j >= 1; --j) {
    const double jy = j * y;
    const double jd = static_cast<double>(j);
    sum += jd * jd * std::exp(-jy) / -std::expm1(-jy);
  }
  return sum;
}

/// d/dr of saddle_objective: sum_j j^3 r^{j-1}/(1 - r^j)^2.
inline double saddle_objective_derivative(double r) {
  const double y = -std::log(r);
  const long terms = detail::series_cutoff(y);
  double sum = 0.0;
  for (long j = terms; j >= 1; --j) {
    const double jy = j * y;
    const double jd = static_cast<double>(j);
    const double den = -std::expm1(-jy);
    sum += jd * jd * jd * std::exp(-jy) / (den * den);
  }
  return sum / r;
}

/// The same quantity as 2 sum r^{2j}/(1-r^j)^3 + sum r^j/(1-r^j)^2.
inline double saddle_objective_split(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("saddle_objective_split: need 0 < r < 1");
  const double y = -std::log(r);
  const long terms = detail::series_cutoff(y);
  double cubic = 0.0, square = 0.0;
  for (long j = terms; j >= 1; --j) {
    const double rj = std::exp(-j * y);
    const double den = -std::expm1(-j * y);
    cubic += rj * rj / (den * den * den);
    square += rj / (den * den);
  }
  return 2.0 * cubic + square;
}

enum class SaddleSource { numeric_root, series_expansion };

inline const char* to_string(SaddleSource s) {
  return s == SaddleSource::numeric_root ? "numeric_root" : "series_expansion";
}

struct SaddleSolution {
  long n = 0;
  double r = 0.0;
  double y = 0.0; // -log r
  double b = 0.0; // 6 zeta(3) / (1 - r)^4
  SaddleSource source = SaddleSource::numeric_root;
};

inline double saddle_width(double r) {
  const double d = 1.0 - r;
  return 6.0 * zeta(3.0) / (d * d * d * d);
}

inline SaddleSolution make_saddle(long n, double r, SaddleSource source) {
  return {n, r, -std::log(r), saddle_width(r), source};
}

/// r_n = 1 - a n^{-1/3} + a^2/(2 n^{2/3}) - zeta(3)/(3n), a = [2 zeta(3)]^{1/3}.
inline SaddleSolution saddle_series(long n) {
  if (n < 8) throw RangeError("saddle_series: need n >= 8");
  const double z3 = zeta(3.0);
  const double a = std::cbrt(2.0 * z3);
  const double nd = static_cast<double>(n);
  const double t = std::cbrt(nd);
  const double r = 1.0 - a / t + a * a / (2.0 * t * t) - z3 / (3.0 * nd);
  if (!(r > 0.0 && r < 1.0)) throw RangeError("saddle_series: expansion left (0,1)");
  return make_saddle(n, r, SaddleSource::series_expansion);
}

/// Root of r G'(1,r)/G(1,r) = n: bisection to width 1e-12, then Newton polish.
inline SaddleSolution saddle_solve(long n) {
  if (n < 1) throw RangeError("saddle_solve: need n >= 1");
  const double target = static_cast<double>(n);
  double lo = 0.0;
  double y = std::cbrt(2.0 * zeta(3.0) / target);
  double hi = std::exp(-y);
  while (saddle_objective(hi) <= target) {
    lo = hi;
    y *= 0.5;
    hi = std::exp(-y);
    if (y < 1e-7) throw NumericError("saddle_solve: could not bracket the root");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mid > 0.0 && saddle_objective(mid) < target) lo = mid; else hi = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double step = (saddle_objective(r) - target) / saddle_objective_derivative(r);
    const double next = r - step;
    if (!(next > lo && next < hi)) break;
    r = next;
  }
  if (!(r > 0.0 && r < 1.0)) throw NumericError("saddle_solve: bracket collapsed");
  return make_saddle(n, r, SaddleSource::numeric_root);
}

enum class EstimateFormula { wright, hayman, meinardus };

inline const char* to_string(EstimateFormula f) {
  switch (f) {
    case EstimateFormula::wright: return "wright";
    case EstimateFormula::hayman: return "hayman";
    case EstimateFormula::meinardus: return "meinardus";
  }
  return "unknown";
}

/// log of an estimate of Q(n), split as exponential_arg + power_exponent log n + constant_log.
struct AsymptoticEstimate {
  long n = 0;
  double log_value = 0.0;
  double exponential_arg = 0.0;
  double power_exponent = 0.0;
  double constant_log = 0.0;
  EstimateFormula formula = EstimateFormula::wright;

  double consistency_error() const {
    return std::abs(log_value - (exponential_arg + power_exponent * std::log(static_cast<double>(n)) + constant_log));
  }
};

inline AsymptoticEstimate make_estimate(long n, EstimateFormula f, double exponential_arg,
                                        double power_exponent, double constant_log) {
  const double log_value =
      exponential_arg + power_exponent * std::log(static_cast<double>(n)) + constant_log;
  return {n, log_value, exponential_arg, power_exponent, constant_log, f};
}

inline double wright_constant_c() {
  static const double c = glaisher_c();
  return c;
}

/// Q(n) ~ zeta(3)^{7/36} / (2^{11/36} 3^{1/2} pi^{1/2}) n^{-25/36} exp{3 zeta(3)^{1/3} (n/2)^{2/3} + 2c}
inline AsymptoticEstimate wright_estimate(long n) {
  if (n < 1) throw RangeError("wright_estimate: need n >= 1");
  const double z3 = zeta(3.0);
  const double nd = static_cast<double>(n);
  const double expo = 3.0 * std::cbrt(z3) * std::pow(nd / 2.0, 2.0 / 3.0) + 2.0 * wright_constant_c();
  const double constant = (7.0 / 36.0) * std::log(z3) - (11.0 / 36.0) * std::log(2.0) -
                          0.5 * std::log(3.0) - 0.5 * std::log(std::numbers::pi);
  return make_estimate(n, EstimateFormula::wright, expo, -25.0 / 36.0, constant);
}

/// Q(n) ~ G(1,r_n) r_n^{-n} / sqrt(2 pi b(r_n)).
inline AsymptoticEstimate hayman_estimate(long n, const SaddleSolution& s) {
  if (s.n != n) throw DomainError("hayman_estimate: saddle solution belongs to another n");
  const double expo = log_g(1.0, s.r).real() + static_cast<double>(n) * s.y;
  const double constant = -0.5 * std::log(2.0 * std::numbers::pi * s.b);
  return make_estimate(n, EstimateFormula::hayman, expo, 0.0, constant);
}

namespace detail {

// log G(1, e^{-y}) - zeta(3)/y^2 - log(y)/12
inline double meinardus_remainder(double y) {
  return log_g(1.0, std::exp(-y)).real() - zeta(3.0) / (y * y) - std::log(y) / 12.0;
}

} // namespace detail

/// D'(0) for D(s) = zeta(s-1), matched from log G(1,e^{-y}) on y = 0.1, 0.05, 0.025
/// with two Richardson levels (the remainder is even in y).
inline double meinardus_dprime0() {
  static const double value = [] {
    const double k0 = detail::meinardus_remainder(0.1);
    const double k1 = detail::meinardus_remainder(0.05);
    const double k2 = detail::meinardus_remainder(0.025);
    const double r1 = (4.0 * k1 - k0) / 3.0;
    const double r2 = (4.0 * k2 - k1) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
  }();
  return value;
}

/// zeta(3) v^{-2} + (1/12) log v + D'(0), for Re v > 0 and |arg v| <= pi/4.
inline Complex meinardus_log_g(Complex v) {
  if (!(v.real() > 0.0) || std::abs(std::arg(v)) > std::numbers::pi / 4.0 + 1e-15) {
    throw DomainError("meinardus_log_g: v outside the sector |arg v| <= pi/4");
  }
  return zeta(3.0) / (v * v) + std::log(v) / 12.0 + meinardus_dprime0();
}

/// Meinardus' coefficient formula for a_j = j (alpha = 2, A = 1, D(0) = -1/12),
/// with D'(0) from meinardus_dprime0().
inline AsymptoticEstimate meinardus_estimate(long n) {
  if (n < 1) throw RangeError("meinardus_estimate: need n >= 1");
  constexpr double alpha = 2.0;
  constexpr double residue = 1.0;
  constexpr double d0 = -1.0 / 12.0;
  const double k = residue * std::tgamma(alpha + 1.0) * zeta(alpha + 1.0);
  const double nd = static_cast<double>(n);
  const double expo = std::pow(nd, alpha / (alpha + 1.0)) * (1.0 + 1.0 / alpha) * std::pow(k, 1.0 / (alpha + 1.0)) +
                      meinardus_dprime0();
  const double power = (d0 - 1.0 - alpha / 2.0) / (1.0 + alpha);
  const double constant = -0.5 * std::log(2.0 * std::numbers::pi * (1.0 + alpha)) +
                          (1.0 - 2.0 * d0) / (2.0 + 2.0 * alpha) * std::log(k);
  return make_estimate(n, EstimateFormula::meinardus, expo, power, constant);
}

/// delta_n = n^{-5/9} / log n.
inline double lemma_delta(long n) {
  const double nd = static_cast<double>(n);
  return std::pow(nd, -5.0 / 9.0) / std::log(nd);
}

struct Lemma1Report {
  long n = 0;
  double delta = 0.0;
  int grid_size = 0;
  double max_rel_error = 0.0;
  double scaled_error = 0.0; // max_rel_error * log^3 n
  double theta_at_max = 0.0;
};

/// |G(1, r e^{i theta}) e^{-i theta n} / (G(1,r) e^{-theta^2 b/2}) - 1| on a
/// uniform grid over [-delta_n, delta_n] at the numeric saddle point.
inline Lemma1Report verify_lemma1(long n, int grid_size = 201) {
  if (n < 3) throw RangeError("verify_lemma1: need n >= 3");
  if (grid_size < 2) throw RangeError("verify_lemma1: need at least 2 grid points");
  const double delta = lemma_delta(n);
  if (!(delta < std::numbers::pi)) throw RangeError("verify_lemma1: delta_n >= pi");
  const SaddleSolution s = saddle_solve(n);
  const double g0 = log_g(1.0, s.r).real();
  Lemma1Report rep{n, delta, grid_size, 0.0, 0.0, 0.0};
  const double nd = static_cast<double>(n);
  for (int i = 0; i < grid_size; ++i) {
    const double theta = -delta + 2.0 * delta * i / (grid_size - 1);
    double err = 0.0;
    if (theta != 0.0) {
      const Complex lhs = log_g(Complex(1.0, 0.0), std::polar(s.r, theta)) - Complex(0.0, theta * nd);
      const Complex log_ratio = lhs - g0 + 0.5 * theta * theta * s.b;
      err = std::abs(std::exp(log_ratio) - 1.0);
    }
    if (err > rep.max_rel_error) {
      rep.max_rel_error = err;
      rep.theta_at_max = theta;
    }
  }
  const double ln = std::log(nd);
  rep.scaled_error = rep.max_rel_error * ln * ln * ln;
  return rep;
}

/// The exponent -2 n^{2/9} / ([2 zeta(3)]^{4/3} log^2 n) of the off-peak bound.
inline double lemma2_bound_exponent(long n) {
  const double nd = static_cast<double>(n);
  const double ln = std::log(nd);
  return -2.0 * std::pow(nd, 2.0 / 9.0) / (std::pow(2.0 * zeta(3.0), 4.0 / 3.0) * ln * ln);
}

/// H(theta,T) = Re[r e^{i(theta+T)}/(1 - r e^{i theta})^2] - r/(1-r)^2, an
/// upper bound for log|G(e^{iT}, r e^{i theta})| - log G(1,r).
inline double lemma2_h(double r, double theta, double T) {
  const Complex x = std::polar(r, theta);
  const Complex one_minus = 1.0 - x;
  const double main = (std::polar(r, theta + T) / (one_minus * one_minus)).real();
  return main - r / ((1.0 - r) * (1.0 - r));
}

struct Lemma2Report {
  long n = 0;
  double T = 0.0;
  double delta = 0.0;
  double max_log_ratio = 0.0;    // max log(|G(e^{iT}, r e^{i theta})| / G(1,r))
  double theta_at_max = 0.0;
  double bound_exponent = 0.0;
  double fitted_constant = 0.0;  // max_log_ratio - bound_exponent
  double max_ratio() const { return std::exp(max_log_ratio); }
};

/// Samples |theta| in [delta_n, pi] on a log-spaced grid (both signs, with
/// theta = +-delta_n exactly) at the numeric saddle point.
inline Lemma2Report verify_lemma2(long n, double T, int theta_samples = 512) {
  if (n < 3) throw RangeError("verify_lemma2: need n >= 3");
  if (theta_samples < 2) throw RangeError("verify_lemma2: need at least 2 samples");
  const double delta = lemma_delta(n);
  const SaddleSolution s = saddle_solve(n);
  const double g0 = log_g(1.0, s.r).real();
  const Complex u = std::polar(1.0, T);
  Lemma2Report rep;
  rep.n = n;
  rep.T = T;
  rep.delta = delta;
  rep.max_log_ratio = -HUGE_VAL;
  const double log_lo = std::log(delta);
  const double log_hi = std::log(std::numbers::pi);
  for (int i = 0; i < theta_samples; ++i) {
    const double mag = (i == 0) ? delta
                       : (i + 1 == theta_samples) ? std::numbers::pi
                       : std::exp(log_lo + (log_hi - log_lo) * i / (theta_samples - 1));
    for (double theta : {mag, -mag}) {
      const double v = log_g(u, std::polar(s.r, theta)).real() - g0;
      if (v > rep.max_log_ratio) {
        rep.max_log_ratio = v;
        rep.theta_at_max = theta;
      }
    }
  }
  rep.bound_exponent = lemma2_bound_exponent(n);
  rep.fitted_constant = rep.max_log_ratio - rep.bound_exponent;
  return rep;
}

} // namespace planepart
