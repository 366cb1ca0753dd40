// Build the exact trace table, print a few rows, and compare the
// normalized trace distribution at n = 200 with the standard normal.

#include <iostream>

#include "planepart/clt.hpp"
#include "planepart/exact.hpp"

int main() {
  using namespace planepart;
  const auto table = build_trace_table(200);

  for (int n = 1; n <= 6; ++n) {
    std::cout << "Q(" << n << ") = " << table.row_sum(n) << "  by trace:";
    for (int m = 1; m <= n; ++m) std::cout << ' ' << table.at(n, m);
    std::cout << '\n';
  }

  const auto pmf = trace_pmf(table, 200, PmfMode::rational);
  const auto rep = clt_report(pmf);
  std::cout << "n=200 mean=" << rep.exact_mean << " var=" << rep.exact_var << " ks=" << rep.ks_distance
            << " cf_error=" << rep.cf_error << '\n';
}
