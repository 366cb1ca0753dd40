// Saddle point and the three estimates of Q(n) for a few sizes.

#include <cmath>
#include <cstdio>

#include "planepart/asympt.hpp"
#include "planepart/exact.hpp"

int main() {
  using namespace planepart;
  const auto q = count_q(400);
  for (long n : {100L, 200L, 400L}) {
    const auto s = saddle_solve(n);
    const double log_q = std::log(q[n].convert_to<double>());
    std::printf("n=%ld r_n=%.12f  Q/wright=%.4f  Q/hayman=%.4f  Q/meinardus=%.4f\n", n, s.r,
                std::exp(log_q - wright_estimate(n).log_value), std::exp(log_q - hayman_estimate(n, s).log_value),
                std::exp(log_q - meinardus_estimate(n).log_value));
  }
  for (long n : {1000L, 100000L}) {
    const auto a = saddle_solve(n);
    const auto b = saddle_series(n);
    std::printf("n=%ld root r=%.15f series r=%.15f\n", n, a.r, b.r);
  }
}
