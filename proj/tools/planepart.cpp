// planepart: command-line front end for the trace tables, saddle point,
// asymptotic estimates, CLT reports, lemma checks and samplers.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "planepart/asympt.hpp"
#include "planepart/clt.hpp"
#include "planepart/errors.hpp"
#include "planepart/exact.hpp"
#include "planepart/logspace.hpp"
#include "planepart/parallel.hpp"
#include "planepart/report.hpp"
#include "planepart/sampler.hpp"
#include "planepart/table_io.hpp"
#include "planepart/trend.hpp"

namespace fs = std::filesystem;
using namespace planepart;

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kRange = 3, kCache = 4, kNumeric = 5 };

constexpr int kExactLimit = 500;
constexpr int kLogspaceLimit = 3000;

const char* kExitFooter =
    "Exit codes:\n"
    "  0  success\n"
    "  2  usage error (unknown command, malformed or invalid flags)\n"
    "  3  n outside the mode limits (exact: 500, logspace: 3000)\n"
    "  4  cache directory or output file not readable/writable\n"
    "  5  internal numeric failure\n"
    "\n"
    "The table cache lives in --cache-dir, else $PLANEPART_CACHE, else\n"
    "$XDG_CACHE_HOME/planepart (~/.cache/planepart).";

struct Options {
  std::string format;
  std::string mode = "exact";
  std::string cache_dir;
  std::string out;
  unsigned threads = default_threads();
  long n = 0;
  std::vector<long> n_list;
};

fs::path resolve_cache_dir(const Options& o) {
  if (!o.cache_dir.empty()) return o.cache_dir;
  if (const char* env = std::getenv("PLANEPART_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "planepart";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "planepart";
  return fs::temp_directory_path() / "planepart";
}

TableMode table_mode(const Options& o) { return o.mode == "logspace" ? TableMode::logspace : TableMode::exact; }

int mode_limit(const Options& o) { return table_mode(o) == TableMode::exact ? kExactLimit : kLogspaceLimit; }

void check_n(long n, int limit, const std::string& what) {
  if (n < 1 || n > limit) {
    throw RangeError(what + ": n=" + std::to_string(n) + " outside 1.." + std::to_string(limit));
  }
}

void check_n_list(const std::vector<long>& ns, int lo, int limit, const std::string& what) {
  if (ns.empty()) throw DomainError(what + ": --n-list must not be empty");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (i > 0 && ns[i] <= ns[i - 1]) throw DomainError(what + ": --n-list must be strictly increasing");
    if (ns[i] < lo || ns[i] > limit) {
      throw RangeError(what + ": n=" + std::to_string(ns[i]) + " outside " + std::to_string(lo) + ".." +
                       std::to_string(limit));
    }
  }
}

std::string emit_json(const Json& j) { return j.dump(2) + "\n"; }

class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_) throw CacheError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw CacheError("write to output failed");
  }

private:
  std::ofstream file_;
};

// --- commands ---------------------------------------------------------------

void run_count(const Options& o, std::ostream& os) {
  check_n(o.n, kExactLimit, "count");
  const auto q = count_q(static_cast<int>(o.n));
  if (o.format == "json") {
    Json j = document_header();
    j["command"] = "count";
    Json arr = Json::array();
    for (const auto& v : q) arr.push_back(v.str());
    j["q"] = arr;
    os << emit_json(j);
  } else if (o.format == "csv") {
    os << kCsvFormatLine << "\nn,Q(n)\n";
    for (std::size_t n = 0; n < q.size(); ++n) os << n << ',' << q[n].str() << '\n';
  } else {
    for (std::size_t n = 0; n < q.size(); ++n) os << n << ' ' << q[n].str() << '\n';
  }
}

TracePmf load_pmf(const Options& o, TableCache& cache, int n, bool real) {
  if (table_mode(o) == TableMode::exact) {
    return trace_pmf(cache.exact(n), n, real ? PmfMode::real : PmfMode::rational);
  }
  return trace_pmf(cache.logspace(n, o.threads), n);
}

void run_trace_pmf(const Options& o, const std::string& pmf_kind, std::ostream& os) {
  check_n(o.n, mode_limit(o), "trace-pmf");
  TableCache cache(resolve_cache_dir(o), &std::cerr);
  const int n = static_cast<int>(o.n);
  const auto pmf = load_pmf(o, cache, n, pmf_kind == "real");
  if (o.format == "json") {
    Json j = document_header();
    j["command"] = "trace-pmf";
    j["n"] = n;
    j["mode"] = o.mode;
    Json rows = Json::array();
    for (int m = 1; m <= n; ++m) {
      if (!pmf.exact.empty()) {
        const auto& p = pmf.exact[m - 1];
        rows.push_back({{"m", m},
                        {"prob_num", boost::multiprecision::numerator(p).str()},
                        {"prob_den", boost::multiprecision::denominator(p).str()}});
      } else {
        rows.push_back({{"m", m}, {"prob", pmf.prob(m)}});
      }
    }
    j["pmf"] = rows;
    os << emit_json(j);
  } else {
    write_pmf_csv(os, pmf);
  }
}

void run_saddle(const Options& o, std::ostream& os) {
  if (o.n < 1) throw RangeError("saddle: need n >= 1");
  const auto root = saddle_solve(o.n);
  std::optional<SaddleSolution> series;
  if (o.n >= 8) series = saddle_series(o.n);
  const double residual = std::abs(saddle_objective_split(root.r) - o.n) / static_cast<double>(o.n);
  if (o.format == "csv") {
    os << kCsvFormatLine << "\nsource,n,r_n,y_n,b_rn\n";
    for (const auto* s : std::initializer_list<const SaddleSolution*>{&root, series ? &*series : nullptr}) {
      if (!s) continue;
      os << to_string(s->source) << ',' << s->n << ',' << csv_real(s->r) << ',' << csv_real(s->y) << ','
         << csv_real(s->b) << '\n';
    }
    return;
  }
  Json j = document_header();
  j["command"] = "saddle";
  j["n"] = o.n;
  j["numeric_root"] = to_json(root);
  j["series_expansion"] = series ? to_json(*series) : Json(nullptr);
  j["relative_residual"] = residual;
  os << emit_json(j);
}

void run_asympt(const Options& o, std::ostream& os) {
  if (o.n < 1) throw RangeError("asympt: need n >= 1");
  const std::vector<AsymptoticEstimate> est = {wright_estimate(o.n), hayman_estimate(o.n, saddle_solve(o.n)),
                                               meinardus_estimate(o.n)};
  std::optional<double> log_exact;
  if (o.n <= kExactLimit) {
    const auto q = count_q(static_cast<int>(o.n));
    log_exact = std::log(q.back().convert_to<double>());
  }
  if (o.format == "csv") {
    os << kCsvFormatLine << "\nformula,n,log_value,exponential_arg,power_exponent,constant_log,exact_ratio\n";
    for (const auto& e : est) {
      os << to_string(e.formula) << ',' << e.n << ',' << csv_real(e.log_value) << ',' << csv_real(e.exponential_arg)
         << ',' << csv_real(e.power_exponent) << ',' << csv_real(e.constant_log) << ',';
      if (log_exact) os << csv_real(std::exp(*log_exact - e.log_value));
      os << '\n';
    }
    return;
  }
  Json j = document_header();
  j["command"] = "asympt";
  j["n"] = o.n;
  Json arr = Json::array();
  for (const auto& e : est) {
    Json rec = to_json(e);
    // Q(n)_exact / estimate
    rec["exact_ratio"] = log_exact ? Json(std::exp(*log_exact - e.log_value)) : Json(nullptr);
    arr.push_back(rec);
  }
  j["estimates"] = arr;
  if (log_exact) j["log_q_exact"] = *log_exact;
  os << emit_json(j);
}

std::string trend_word(const std::vector<double>& v) {
  if (v.size() < 2) return "insufficient";
  return strictly_decreasing(v) ? "decreasing" : "not_decreasing";
}

void run_clt(const Options& o, std::ostream& os) {
  check_n_list(o.n_list, 2, mode_limit(o), "clt");
  TableCache cache(resolve_cache_dir(o), &std::cerr);
  const int n_max = static_cast<int>(o.n_list.back());
  std::vector<TracePmf> pmfs;
  if (table_mode(o) == TableMode::exact) {
    const auto t = cache.exact(n_max);
    for (long n : o.n_list) pmfs.push_back(trace_pmf(t, static_cast<int>(n), PmfMode::real));
  } else {
    const auto t = cache.logspace(n_max, o.threads);
    for (long n : o.n_list) pmfs.push_back(trace_pmf(t, static_cast<int>(n)));
  }
  std::vector<CltReport> reports(pmfs.size());
  parallel_for(pmfs.size(), o.threads, [&](std::size_t i) { reports[i] = clt_report(pmfs[i]); });

  std::vector<double> ns, ks, cf, mr, vr;
  for (const auto& r : reports) {
    ns.push_back(r.n);
    ks.push_back(r.ks_distance);
    cf.push_back(r.cf_error);
    mr.push_back(r.mean_ratio);
    vr.push_back(r.var_ratio);
  }
  Json summary;
  summary["ks_trend"] = trend_word(ks);
  summary["cf_trend"] = trend_word(cf);
  if (ns.size() >= 2) {
    summary["mean_ratio_trend_slope"] = ratio_trend_slope(ns, mr);
    summary["var_ratio_trend_slope"] = ratio_trend_slope(ns, vr);
  }

  if (o.format == "json") {
    Json j = document_header();
    j["command"] = "clt";
    j["mode"] = o.mode;
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    j["reports"] = arr;
    j["summary"] = summary;
    os << emit_json(j);
  } else {
    write_clt_csv(os, reports);
    for (const auto& [k, v] : summary.items()) os << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

void run_lemma(const Options& o, int which, double t_scale, std::ostream& os) {
  check_n_list(o.n_list, 3, std::numeric_limits<int>::max(), "lemma-check");
  Json j = document_header();
  j["command"] = "lemma-check";
  j["lemma"] = which;
  Json arr = Json::array();
  std::vector<double> ns, primary;
  std::vector<std::string> csv_rows;
  if (which == 1) {
    for (long n : o.n_list) {
      const auto r = verify_lemma1(n);
      arr.push_back(to_json(r));
      ns.push_back(static_cast<double>(n));
      primary.push_back(r.max_rel_error);
      csv_rows.push_back(std::to_string(n) + ',' + csv_real(r.delta) + ',' + csv_real(r.max_rel_error) + ',' +
                         csv_real(r.scaled_error) + ',' + csv_real(r.theta_at_max));
    }
    Json summary;
    summary["max_error_trend"] = trend_word(primary);
    if (ns.size() >= 2) {
      std::vector<double> scaled;
      for (const auto& r : arr) scaled.push_back(r["scaled_error"].get<double>());
      summary["scaled_error_growth_exponent"] = growth_exponent(ns, scaled);
    }
    j["summary"] = summary;
  } else {
    for (long n : o.n_list) {
      const double nd = static_cast<double>(n);
      const double T = t_scale * std::pow(nd, -1.0 / 3.0) / std::sqrt(std::log(nd));
      const auto r = verify_lemma2(n, T);
      arr.push_back(to_json(r));
      primary.push_back(r.fitted_constant);
      csv_rows.push_back(std::to_string(n) + ',' + csv_real(r.T) + ',' + csv_real(r.delta) + ',' +
                         csv_real(r.max_log_ratio) + ',' + csv_real(r.bound_exponent) + ',' +
                         csv_real(r.fitted_constant) + ',' + csv_real(r.theta_at_max));
    }
    Json summary;
    summary["fitted_constant_max"] = *std::max_element(primary.begin(), primary.end());
    bool non_increasing = true;
    for (std::size_t i = 1; i < primary.size(); ++i) non_increasing = non_increasing && primary[i] <= primary[i - 1];
    summary["fitted_constant_trend"] = primary.size() < 2 ? "insufficient" : non_increasing ? "non_increasing" : "increasing";
    j["summary"] = summary;
  }
  j["reports"] = arr;
  if (o.format == "csv") {
    os << kCsvFormatLine << '\n';
    os << (which == 1 ? "n,delta_n,max_rel_error,scaled_error,theta_at_max\n"
                      : "n,T,delta_n,max_log_ratio,bound_exponent,fitted_constant,theta_at_max\n");
    for (const auto& row : csv_rows) os << row << '\n';
    for (const auto& [k, v] : j["summary"].items()) os << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  } else {
    os << emit_json(j);
  }
}

void run_sample(const Options& o, const std::string& method, long samples, std::uint64_t seed,
                std::optional<double> x, std::ostream& os) {
  if (samples < 1) throw DomainError("sample: --samples must be positive");
  const int limit = method == "table" ? kExactLimit : kLogspaceLimit;
  check_n(o.n, limit, "sample");
  SamplerConfig cfg;
  cfg.x = x.value_or(saddle_solve(o.n).r);
  cfg.seed = seed;
  std::vector<ColoredPartsSample> batch;
  const auto count = static_cast<std::size_t>(samples);
  if (method == "rejection") {
    batch = exact_size_batch(cfg, o.n, count, o.threads);
  } else if (method == "boltzmann") {
    batch = boltzmann_batch(cfg, count, o.threads);
  } else {
    TableCache cache(resolve_cache_dir(o), &std::cerr);
    const auto t = cache.exact(static_cast<int>(o.n));
    for (int m : exact_uniform_batch(t, static_cast<int>(o.n), count, seed)) {
      ColoredPartsSample s;
      s.size = o.n;
      s.parts = m;
      batch.push_back(s);
    }
  }
  if (o.format == "json") {
    // JSON lines: one header object, then one object per sample
    Json head = document_header();
    head["command"] = "sample";
    head["method"] = method;
    head["n"] = o.n;
    head["config"] = {{"x", cfg.x}, {"u", cfg.u}, {"seed", cfg.seed}, {"max_attempts", cfg.max_attempts},
                      {"prng", "mt19937_64"}, {"stream_seed", "splitmix64"}};
    os << head.dump() << '\n';
    for (std::size_t i = 0; i < batch.size(); ++i) {
      os << Json{{"sample_index", i}, {"size", batch[i].size}, {"parts", batch[i].parts}}.dump() << '\n';
    }
  } else {
    write_batch_csv(os, cfg, o.n, batch, method);
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plane-partition trace analytics: exact tables, asymptotics, CLT checks, sampling"};
  app.footer(kExitFooter);
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_mode) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    if (with_mode) sub->add_option("--mode", o.mode, "Table backend")->check(CLI::IsMember({"exact", "logspace"}));
    sub->add_option("--cache-dir", o.cache_dir, "Table cache directory");
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "Write the primary output here instead of stdout");
  };

  auto* count = app.add_subcommand("count", "Print Q(0..N)");
  count->add_option("--n", o.n, "Largest n")->required();
  add_common(count, false);

  std::string pmf_kind = "rational";
  auto* pmf = app.add_subcommand("trace-pmf", "Trace distribution P(trace = m) at size N");
  pmf->add_option("--n", o.n, "Size n")->required();
  pmf->add_option("--pmf", pmf_kind, "rational (m,prob_num,prob_den) or real (m,prob); logspace is always real")
      ->check(CLI::IsMember({"rational", "real"}));
  add_common(pmf, true);

  auto* saddle = app.add_subcommand("saddle", "Saddle point r_n from the root finder and from the series");
  saddle->add_option("--n", o.n, "Size n")->required();
  add_common(saddle, false);

  auto* asympt = app.add_subcommand("asympt", "Wright, Hayman and Meinardus estimates of Q(N)");
  asympt->add_option("--n", o.n, "Size n")->required();
  add_common(asympt, false);

  auto* clt = app.add_subcommand("clt", "Normalized trace distribution against N(0,1)");
  clt->add_option("--n-list", o.n_list, "Strictly increasing sizes")->required()->delimiter(',');
  add_common(clt, true);

  int which = 1;
  double t_scale = 1.0;
  auto* lemma = app.add_subcommand("lemma-check", "Local Gaussian approximation (1) or off-peak bound (2)");
  lemma->add_option("--which", which, "Lemma")->required()->check(CLI::IsMember({1, 2}));
  lemma->add_option("--n-list", o.n_list, "Strictly increasing sizes")->required()->delimiter(',');
  lemma->add_option("--t-scale", t_scale, "T = scale * n^{-1/3} / sqrt(log n) for --which 2");
  add_common(lemma, false);

  long samples = 1000;
  std::uint64_t seed = 0;
  std::string method = "rejection";
  std::optional<double> x;
  auto* sample = app.add_subcommand("sample", "Random (size, parts) draws");
  sample->add_option("--n", o.n, "Size n")->required();
  sample->add_option("--samples", samples, "Number of draws");
  sample->add_option("--seed", seed, "Base seed");
  sample->add_option("--method", method,
                     "rejection: exact size by Boltzmann rejection; boltzmann: free draws at x; "
                     "table: inverse CDF on the exact table")
      ->check(CLI::IsMember({"rejection", "boltzmann", "table"}));
  sample->add_option("--x", x, "Tilt (default r_n)");
  add_common(sample, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    Output out(o.out);
    std::ostream& os = out.stream();
    if (*count) run_count(o, os);
    else if (*pmf) run_trace_pmf(o, pmf_kind, os);
    else if (*saddle) run_saddle(o, os);
    else if (*asympt) run_asympt(o, os);
    else if (*clt) run_clt(o, os);
    else if (*lemma) run_lemma(o, which, t_scale, os);
    else if (*sample) run_sample(o, method, samples, seed, x, os);
    out.finish();
  } catch (const RangeError& e) {
    std::cerr << "planepart: " << e.what() << '\n';
    return kRange;
  } catch (const CacheError& e) {
    std::cerr << "planepart: " << e.what() << '\n';
    return kCache;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "planepart: " << e.what() << '\n';
    return kCache;
  } catch (const DomainError& e) {
    std::cerr << "planepart: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "planepart: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
