#pragma once

// Scalar special functions: Riemann zeta on the real axis, the Debye-type
// integrals psi_{m,k}(z,T) and the constant c = int_0^inf y log y/(e^{2 pi y}-1) dy.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "planepart/errors.hpp"

namespace planepart {

using Complex = std::complex<double>;

inline bool is_finite(const Complex& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

/// Settings for adaptive Simpson integration over [z, Y], where the
/// infinite upper limit is replaced by Y = z + cutoff_base + cutoff_per_power * m.
struct Quadrature {
  double abs_tol = 1e-12;
  int max_subdivisions = 1 << 20;
  double cutoff_base = 50.0;
  double cutoff_per_power = 10.0;

  void validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("Quadrature: abs_tol must be positive");
    if (max_subdivisions < 1) throw DomainError("Quadrature: max_subdivisions must be >= 1");
  }

  double upper_cutoff(double z, int power) const {
    return z + cutoff_base + cutoff_per_power * power;
  }
};

namespace detail {

struct SimpsonBudget {
  int subdivisions = 0;
  int limit = 0;
};

template <class F, class T>
T simpson_step(F& f, double a, double b, T fa, T fm, T fb, T whole, double eps, int depth,
               SimpsonBudget& budget) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  const double h = b - a;
  const T left = (h / 12.0) * (fa + 4.0 * flm + fm);
  const T right = (h / 12.0) * (fm + 4.0 * frm + fb);
  const T delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  if (++budget.subdivisions > budget.limit) {
    throw NumericError("adaptive Simpson: subdivision budget exhausted");
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1, budget) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1, budget);
}

} // namespace detail

/// Adaptive Simpson with Richardson correction. The interval is first cut
/// into `initial_panels` pieces so narrow features near an endpoint are seen.
template <class F>
auto integrate(F&& f, double a, double b, const Quadrature& q, int initial_panels = 64) {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  q.validate();
  detail::SimpsonBudget budget{0, q.max_subdivisions};
  T total{};
  const double width = (b - a) / initial_panels;
  const double eps = q.abs_tol / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_panels) ? b : lo + width;
    const T flo = f(lo);
    const T fhi = f(hi);
    const T fmid = f(0.5 * (lo + hi));
    const T whole = ((hi - lo) / 6.0) * (flo + 4.0 * fmid + fhi);
    total += detail::simpson_step(f, lo, hi, flo, fmid, fhi, whole, eps, 48, budget);
  }
  return total;
}

namespace detail {

// Euler-Maclaurin: sum_{j<N} j^-s + N^{1-s}/(s-1) + N^{-s}/2 + sum_k B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1}
inline double zeta_euler_maclaurin(double s) {
  constexpr int N = 12;
  // B_{2k}/(2k)! for k = 1..10
  constexpr std::array<double, 10> b_over_fact = {
      1.0 / 12.0,
      -1.0 / 720.0,
      1.0 / 30240.0,
      -1.0 / 1209600.0,
      1.0 / 47900160.0,
      -691.0 / 1307674368000.0,
      1.0 / 74724249600.0,
      -3617.0 / 10670622842880000.0,
      43867.0 / 5109094217170944000.0,
      -174611.0 / 802857662698291200000.0,
  };
  double sum = 0.0;
  for (int j = N - 1; j >= 1; --j) sum += std::pow(static_cast<double>(j), -s);
  const double n = N;
  sum += std::pow(n, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(n, -s);
  double rising = s;                // (s)_{2k-1}
  double npow = std::pow(n, -s - 1.0);  // N^{-s-2k+1}
  for (std::size_t k = 0; k < b_over_fact.size(); ++k) {
    sum += b_over_fact[k] * rising * npow;
    rising *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
    npow /= n * n;
  }
  return sum;
}

} // namespace detail

/// Riemann zeta for real s > 1. Values at 2, 3 and 4 come from a table
/// filled once on first use.
inline double zeta(double s) {
  if (!(s > 1.0)) throw DomainError("zeta: argument must be > 1");
  static const std::array<double, 3> cached = {
      detail::zeta_euler_maclaurin(2.0),
      detail::zeta_euler_maclaurin(3.0),
      detail::zeta_euler_maclaurin(4.0),
  };
  if (s == 2.0) return cached[0];
  if (s == 3.0) return cached[1];
  if (s == 4.0) return cached[2];
  return detail::zeta_euler_maclaurin(s);
}

inline bool psi_pair_supported(int m, int k) {
  return (k == 0 && m == 1) || (k == 1 && m == 2) || (k == 1 && m == 3) || (k == 2 && m == 3);
}

namespace detail {

// e^{y - iT} - 1 without cancellation near y = 0, T = 0.
inline Complex expm1_shifted(double y, double T) {
  const double em1 = std::expm1(y);
  const double s = std::sin(0.5 * T);
  const double cos_m1 = -2.0 * s * s;
  const double re = em1 * std::cos(T) + cos_m1;
  const double im = -(em1 + 1.0) * std::sin(T);
  return {re, im};
}

} // namespace detail

/// Integrand of psi_{m,k}: y^m / (e^{y - iT} - 1)^{m-k}, with its analytic
/// limit y^k substituted where the denominator vanishes.
inline Complex psi_integrand(int m, int k, double y, double T) {
  const Complex d = detail::expm1_shifted(y, T);
  if (d == Complex(0.0, 0.0)) return k == 0 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  Complex den = d;
  for (int p = 1; p < m - k; ++p) den *= d;
  return std::pow(y, m) / den;
}

/// psi_{m,k}(z,T) = int_z^inf y^m / (e^{y-iT} - 1)^{m-k} dy for the four
/// pairs (k,m) in {(0,1),(1,2),(1,3),(2,3)}.
inline Complex psi(int m, int k, double z, double T, const Quadrature& q = {}) {
  if (!psi_pair_supported(m, k)) {
    throw DomainError("psi: unsupported (k,m) pair (" + std::to_string(k) + "," +
                      std::to_string(m) + ")");
  }
  if (!(z >= 0.0) || !std::isfinite(T)) throw DomainError("psi: need z >= 0 and finite T");
  const double upper = q.upper_cutoff(z, m);
  const Complex v = integrate([&](double y) { return psi_integrand(m, k, y, T); }, z, upper, q);
  if (!is_finite(v)) throw NumericError("psi: non-finite result");
  return v;
}

/// y log y / (e^{2 pi y} - 1); diverges like log(y)/(2 pi) as y -> 0+.
inline double glaisher_integrand(double y) {
  if (y <= 0.0) return -HUGE_VAL;
  return y * std::log(y) / std::expm1(2.0 * std::numbers::pi * y);
}

/// The same integrand after y = s^2 (dy = 2 s ds); tends to 0 at s = 0.
inline double glaisher_integrand_substituted(double s) {
  if (s <= 0.0) return 0.0;
  const double y = s * s;
  return 4.0 * s * y * std::log(s) / std::expm1(2.0 * std::numbers::pi * y);
}

/// c = int_0^inf y log y / (e^{2 pi y} - 1) dy, integrated in s = sqrt(y).
inline double glaisher_c(const Quadrature& q = {}) {
  const double upper = std::sqrt(q.upper_cutoff(0.0, 1));
  return integrate(glaisher_integrand_substituted, 0.0, upper, q);
}

} // namespace planepart
