#pragma once

// JSON / CSV serialization of the record types. CSV output starts with
// `# planepart-format: 1`; JSON documents carry format_version and log_base.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "planepart/asympt.hpp"
#include "planepart/clt.hpp"
#include "planepart/exact.hpp"
#include "planepart/sampler.hpp"

namespace planepart {

using Json = nlohmann::ordered_json;

inline constexpr int kReportFormatVersion = 1;
inline constexpr const char* kCsvFormatLine = "# planepart-format: 1";

inline Json document_header() {
  Json j;
  j["format_version"] = kReportFormatVersion;
  j["log_base"] = "e";
  return j;
}

inline std::string csv_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json to_json(const SaddleSolution& s) {
  return Json{{"n", s.n}, {"r_n", s.r}, {"y_n", s.y}, {"b_rn", s.b}, {"source", to_string(s.source)}};
}

inline Json to_json(const AsymptoticEstimate& e) {
  return Json{{"formula", to_string(e.formula)},
              {"n", e.n},
              {"log_value", e.log_value},
              {"components",
               {{"exponential_arg", e.exponential_arg},
                {"power_exponent", e.power_exponent},
                {"constant_log", e.constant_log}}}};
}

inline Json to_json(const CltReport& r) {
  return Json{{"n", r.n},
              {"exact_mean", r.exact_mean},
              {"exact_var", r.exact_var},
              {"mean_ratio", r.mean_ratio},
              {"var_ratio", r.var_ratio},
              {"ks_distance", r.ks_distance},
              {"cf_error", r.cf_error}};
}

inline Json to_json(const Lemma1Report& r) {
  return Json{{"n", r.n},
              {"delta_n", r.delta},
              {"grid_size", r.grid_size},
              {"max_rel_error", r.max_rel_error},
              {"scaled_error", r.scaled_error},
              {"theta_at_max", r.theta_at_max}};
}

inline Json to_json(const Lemma2Report& r) {
  return Json{{"n", r.n},
              {"T", r.T},
              {"delta_n", r.delta},
              {"max_log_ratio", r.max_log_ratio},
              {"max_ratio", r.max_ratio()},
              {"theta_at_max", r.theta_at_max},
              {"bound_exponent", r.bound_exponent},
              {"fitted_constant", r.fitted_constant}};
}

inline Json to_json(const ColoredPartsSample& s) {
  Json parts = Json::array();
  for (const auto& [key, count] : s.multiplicities) parts.push_back({key.first, key.second, count});
  return Json{{"size", s.size}, {"parts", s.parts}, {"multiplicities", parts}};
}

inline const char* kCltCsvHeader = "n,exact_mean,exact_var,mean_ratio,var_ratio,ks_distance,cf_error";

inline std::string csv_row(const CltReport& r) {
  return std::to_string(r.n) + ',' + csv_real(r.exact_mean) + ',' + csv_real(r.exact_var) + ',' +
         csv_real(r.mean_ratio) + ',' + csv_real(r.var_ratio) + ',' + csv_real(r.ks_distance) + ',' +
         csv_real(r.cf_error);
}

inline void write_clt_csv(std::ostream& os, const std::vector<CltReport>& reports) {
  os << kCsvFormatLine << '\n' << kCltCsvHeader << '\n';
  for (const auto& r : reports) os << csv_row(r) << '\n';
}

/// `m,prob_num,prob_den` for rational pmfs, `m,prob` for real ones.
inline void write_pmf_csv(std::ostream& os, const TracePmf& pmf) {
  os << kCsvFormatLine << '\n';
  if (pmf.mode == PmfMode::rational && !pmf.exact.empty()) {
    os << "m,prob_num,prob_den\n";
    for (int m = 1; m <= pmf.n; ++m) {
      const Rational& p = pmf.exact[m - 1];
      os << m << ',' << boost::multiprecision::numerator(p).str() << ','
         << boost::multiprecision::denominator(p).str() << '\n';
    }
  } else {
    os << "m,prob\n";
    for (int m = 1; m <= pmf.n; ++m) os << m << ',' << csv_real(pmf.prob(m)) << '\n';
  }
}

/// Batch CSV `sample_index,size,parts`; the sampler config is echoed as comments.
inline void write_batch_csv(std::ostream& os, const SamplerConfig& cfg, long n,
                            const std::vector<ColoredPartsSample>& batch, const std::string& method = "") {
  os << kCsvFormatLine << '\n';
  if (!method.empty()) os << "# method=" << method << '\n';
  os << "# n=" << n << " x=" << csv_real(cfg.x) << " u=" << csv_real(cfg.u) << " seed=" << cfg.seed
     << " max_attempts=" << cfg.max_attempts << " prng=mt19937_64 stream=splitmix64\n"
     << "sample_index,size,parts\n";
  for (std::size_t i = 0; i < batch.size(); ++i) {
    os << i << ',' << batch[i].size << ',' << batch[i].parts << '\n';
  }
}

} // namespace planepart
