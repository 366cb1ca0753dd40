#pragma once

// Small helpers for asserting trends along increasing n.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace planepart {

inline bool strictly_decreasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

/// Ordinary least-squares slope of y against x.
inline double ls_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ls_slope: need >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

/// Fitted exponent p in value ~ C n^p. A bounded sequence has p <= 0 up to noise.
inline double growth_exponent(std::span<const double> n, std::span<const double> value) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n.size(); ++i) {
    lx.push_back(std::log(n[i]));
    ly.push_back(std::log(value[i]));
  }
  return ls_slope(lx, ly);
}

/// "No growth trend": fitted exponent at most this.
inline constexpr double kBoundedGrowthExponent = 0.05;

inline bool bounded_along(std::span<const double> n, std::span<const double> value) {
  return growth_exponent(n, value) <= kBoundedGrowthExponent;
}

/// Slope of |ratio - 1| against 1/log n. Positive means the error shrinks
/// as n grows.
inline double ratio_trend_slope(std::span<const double> n, std::span<const double> ratio) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n.size(); ++i) {
    x.push_back(1.0 / std::log(n[i]));
    y.push_back(std::abs(ratio[i] - 1.0));
  }
  return ls_slope(x, y);
}

} // namespace planepart
