// trigmin: Monte Carlo experiments on the minimum modulus of random
// trigonometric polynomials.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trigmin/config.hpp"
#include "trigmin/errors.hpp"
#include "trigmin/pipeline.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace trigmin;

constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kThresholds = 1, kUsage = 2, kConfig = 3, kOutput = 4, kNumeric = 5 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> shortcuts;
  unsigned workers = 0;
  bool survival = false;
};

const std::vector<std::pair<std::string, std::string>> kShortcuts = {
    {"--n", "n"},
    {"--trials", "trials"},
    {"--seed", "seed"},
    {"--model", "model.kind"},
    {"--delta", "model.delta"},
    {"--base", "model.base"},
    {"--eps-net", "eps_net"},
    {"--eps-event", "eps_event"},
    {"--C0", "C0"},
    {"--K", "K"},
    {"--eps-sep", "eps_sep"},
    {"--eps-zone", "eps_zone"},
    {"--k-seed", "k_seed"},
    {"--points", "kernel.points"},
    {"--format", "format"},
    {"--output,-o", "output"},
};

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_file, "key=value configuration file");
  sub->add_option("--set", opts.sets, "override one key, e.g. --set accept.ks_max=0.03");
  for (const auto& [flag, key] : kShortcuts) sub->add_option(flag, opts.shortcuts[key], "sets " + key);
  sub->add_option("--workers", opts.workers, "worker threads (0 = all cores); never changes results");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig build_config(const std::string& sub, const CLI::App* app, const CommonOptions& opts) {
  RunConfig cfg;
  if (sub == "realcase") cfg.model.kind = ModelKind::RealGaussian;
  try {
    if (!opts.config_file.empty()) {
      const std::string text = read_file(opts.config_file);
      const bool real_default = cfg.model.kind == ModelKind::RealGaussian;
      cfg = RunConfig::parse(text);
      // A file that leaves model.kind unset keeps the subcommand's default.
      if (real_default && text.find("model.kind") == std::string::npos) cfg.model.kind = ModelKind::RealGaussian;
    }
    for (const auto& s : opts.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ParameterError("--set expects key=value, got '" + s + "'");
      cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [flag, key] : kShortcuts)
      if (app->count(flag.substr(0, flag.find(','))) > 0) cfg.set(key, opts.shortcuts.at(key));
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

/// Output sink; the file is opened before any work so a bad path fails fast.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw OutputError("cannot open output " + path);
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }
  void finish() {
    out().flush();
    if (!out()) throw OutputError("write to output failed");
  }

private:
  std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double v) { return format_double(v); }

void csv_header(std::ostream& os, const std::string& sub, const RunConfig& cfg) {
  os << "# trigmin " << sub << "\n# schema_version=" << kSchemaVersion << '\n';
  for (const auto& [k, v] : cfg.items()) os << "# " << k << '=' << v << '\n';
}

json config_json(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.items()) j[k] = v;
  return j;
}

json header_json(const std::string& sub, const RunConfig& cfg) {
  return json{{"schema_version", kSchemaVersion}, {"subcommand", sub}, {"seed", cfg.seed}, {"config", config_json(cfg)}};
}

void emit_report(std::ostream& os, const std::string& sub, const RunConfig& cfg, const json& report) {
  json j = header_json(sub, cfg);
  j["report"] = report;
  os << j.dump() << '\n';
}

json interval_json(Interval i) { return json::array({i.lo, i.hi}); }

/// Requested thresholds; the exit status is kThresholds if any fails.
class Thresholds {
public:
  explicit Thresholds(const RunConfig& cfg) : cfg_(cfg) {}

  void at_most(const std::string& key, double value) { check(key, value, [](double v, double t) { return v <= t; }, "<="); }
  void at_least(const std::string& key, double value) { check(key, value, [](double v, double t) { return v >= t; }, ">="); }

  void record(const std::string& name, double value, double limit, bool ok) {
    std::cerr << "threshold " << name << ": value=" << fmt(value) << " limit=" << fmt(limit) << (ok ? " PASS" : " FAIL")
              << '\n';
    failed_ = failed_ || !ok;
  }

  std::optional<double> get(const std::string& key) const {
    const auto it = cfg_.accept.find(key);
    if (it == cfg_.accept.end()) return std::nullopt;
    return it->second;
  }

  int status() const { return failed_ ? kThresholds : kOk; }

private:
  template <typename Cmp>
  void check(const std::string& key, double value, Cmp cmp, const char*) {
    if (const auto t = get(key)) record(key, value, *t, cmp(value, *t));
  }

  const RunConfig& cfg_;
  bool failed_ = false;
};

void law_checks(Thresholds& th, const LawReport& law) {
  th.at_most("ks_max", law.ks.statistic);
  th.at_least("capture_min", law.capture_rate);
}

json law_json(const LawReport& law, std::size_t trials) {
  return json{{"ks", law.ks.statistic},         {"ks_critical_95", law.ks.critical_95},
              {"mean_nm", law.mean_scaled_min}, {"capture_rate", law.capture_rate},
              {"captured", law.captured},       {"excused", law.excused},
              {"zero_slope", law.zero_slope},   {"trials", trials}};
}

json intensity_json(const IntensityReport& r) {
  return json{{"window", interval_json(r.window)}, {"estimate", r.estimate}, {"reference", r.reference},
              {"rel_error", r.rel_error},          {"trials", r.trials}};
}

void log_misses(const LawReport& law) {
  for (const auto& m : law.misses) std::cerr << "capture miss trial=" << m.trial << ": " << m.reason << '\n';
}

int cmd_simulate(const RunConfig& cfg, const CommonOptions& opts, std::ostream& os) {
  const auto outcomes = run_trials(cfg, opts.workers);
  const auto law = law_report(outcomes);
  log_misses(law);
  std::cerr << "ks=" << fmt(law.ks.statistic) << " critical_95=" << fmt(law.ks.critical_95)
            << " capture_rate=" << fmt(law.capture_rate) << '\n';

  if (opts.survival) {
    const auto nm = scaled_minima(outcomes);
    const auto taus = cfg.tau_grid();
    const auto curve = empirical_survival(nm, taus);
    if (cfg.format == OutputFormat::Csv) {
      csv_header(os, "simulate", cfg);
      os << "tau,empirical,reference\n";
      for (std::size_t k = 0; k < taus.size(); ++k)
        os << fmt(curve.taus[k]) << ',' << fmt(curve.empirical[k]) << ',' << fmt(curve.reference[k]) << '\n';
    } else {
      os << header_json("simulate", cfg).dump() << '\n';
      for (std::size_t k = 0; k < taus.size(); ++k)
        os << json{{"tau", curve.taus[k]}, {"empirical", curve.empirical[k]}, {"reference", curve.reference[k]}}.dump()
           << '\n';
    }
  } else if (cfg.format == OutputFormat::Csv) {
    csv_header(os, "simulate", cfg);
    os << "trial,m,nm,argmin,count_in_window,certified_bound\n";
    for (const auto& o : outcomes)
      os << o.trial << ',' << fmt(o.gm.m) << ',' << fmt(o.scaled_min()) << ',' << fmt(o.gm.argmin) << ','
         << o.count_in_window << ',' << fmt(o.gm.certified_bound) << '\n';
  } else {
    os << header_json("simulate", cfg).dump() << '\n';
    for (const auto& o : outcomes)
      os << json{{"trial", o.trial},
                 {"m", o.gm.m},
                 {"nm", o.scaled_min()},
                 {"argmin", o.gm.argmin},
                 {"count_in_window", o.count_in_window},
                 {"certified_bound", o.gm.certified_bound}}
                .dump()
         << '\n';
  }

  Thresholds th(cfg);
  law_checks(th, law);
  return th.status();
}

int cmd_intensity(const RunConfig& cfg, const CommonOptions& opts, std::ostream& os) {
  const auto procs = processes_of(run_trials(cfg, opts.workers));
  const auto r = intensity_report(procs, cfg.window);
  emit_report(os, "intensity", cfg, intensity_json(r));
  Thresholds th(cfg);
  th.at_most("intensity_rel_tol", r.rel_error);
  return th.status();
}

int cmd_poisson(const RunConfig& cfg, const CommonOptions& opts, std::ostream& os) {
  const auto procs = processes_of(run_trials(cfg, opts.workers));
  const auto r = poisson_report(procs, cfg);
  emit_report(os, "poisson", cfg,
              json{{"interval", interval_json(r.counts.interval)},
                   {"mean_count", r.counts.mean_count},
                   {"var_count", r.counts.var_count},
                   {"dispersion", r.counts.dispersion},
                   {"void_prob", r.counts.void_prob},
                   {"void_reference", r.void_reference},
                   {"cov_intervals", json::array({interval_json(r.covariance.interval), interval_json(r.covariance.other)})},
                   {"covariance", r.covariance.covariance},
                   {"covariance_se", r.covariance.covariance_se},
                   {"trials", r.counts.M}});
  Thresholds th(cfg);
  th.at_least("dispersion_min", r.counts.dispersion);
  th.at_most("dispersion_max", r.counts.dispersion);
  const auto target = th.get("void_target");
  const auto tol = th.get("void_tol");
  if (target && tol)
    th.record("void_target+-void_tol", r.counts.void_prob, *target, std::abs(r.counts.void_prob - *target) <= *tol);
  if (const auto k = th.get("cov_se_max")) {
    const double ratio = r.covariance.covariance_se > 0 ? std::abs(r.covariance.covariance) / r.covariance.covariance_se
                                                         : 0.0;
    th.record("cov_se_max", ratio, *k, ratio <= *k);
  }
  return th.status();
}

int cmd_separation(const RunConfig& cfg, const CommonOptions& opts, std::ostream& os) {
  const auto procs = processes_of(run_trials(cfg, opts.workers));
  const auto r = separation_report(procs, cfg.n, cfg.eps_sep);
  emit_report(os, "separation", cfg,
              json{{"eps", r.eps}, {"distance", r.distance}, {"fraction", r.fraction}, {"trials", r.trials}});
  Thresholds th(cfg);
  th.at_most("separation_max", r.fraction);
  return th.status();
}

int cmd_perturb(const RunConfig& cfg, const CommonOptions& opts, std::ostream& os) {
  const auto trials = run_perturb_trials(cfg, opts.workers);
  const auto r = invariance_report(trials, cfg.K);
  emit_report(os, "perturb", cfg,
              json{{"law_ks", r.law_ks},
                   {"shift_mean", r.shift_mean},
                   {"shift_var", r.shift_var},
                   {"shift_ks_gauss", r.shift_ks_gauss},
                   {"unmatched_frac", r.unmatched_frac},
                   {"residual_max_scaled", r.residual_max_scaled},
                   {"matches", r.matches},
                   {"trials", r.trials}});
  Thresholds th(cfg);
  th.at_most("law_ks_max", r.law_ks);
  th.at_least("shift_var_min", r.shift_var);
  th.at_most("shift_var_max", r.shift_var);
  th.at_most("shift_ks_max", r.shift_ks_gauss);
  th.at_most("unmatched_max", r.unmatched_frac);
  return th.status();
}

int cmd_kernel_check(const RunConfig& cfg, const CommonOptions&, std::ostream& os) {
  const auto rows = kernel_check(cfg);
  double worst = 0.0;
  if (cfg.format == OutputFormat::Csv) {
    csv_header(os, "kernel-check", cfg);
    os << "x,r_closed,r_sum,r1_closed,r1_sum,r2_closed,r2_sum,abs_error\n";
  } else {
    os << header_json("kernel-check", cfg).dump() << '\n';
  }
  for (const auto& r : rows) {
    worst = std::max(worst, r.abs_error);
    if (cfg.format == OutputFormat::Csv)
      os << fmt(r.x) << ',' << fmt(r.r_closed) << ',' << fmt(r.r_sum) << ',' << fmt(r.r1_closed) << ','
         << fmt(r.r1_sum) << ',' << fmt(r.r2_closed) << ',' << fmt(r.r2_sum) << ',' << fmt(r.abs_error) << '\n';
    else
      os << json{{"x", r.x},           {"r_closed", r.r_closed},   {"r_sum", r.r_sum},
                 {"r1_closed", r.r1_closed}, {"r1_sum", r.r1_sum}, {"r2_closed", r.r2_closed},
                 {"r2_sum", r.r2_sum}, {"abs_error", r.abs_error}}
                .dump()
         << '\n';
  }
  std::cerr << "max abs_error=" << fmt(worst) << '\n';
  Thresholds th(cfg);
  th.at_most("kernel_err_max", worst);
  return th.status();
}

int cmd_realcase(const RunConfig& cfg, const CommonOptions& opts, std::ostream& os) {
  const auto outcomes = run_trials(cfg, opts.workers, TrialMode::RealCase);
  const auto law = law_report(outcomes);
  log_misses(law);
  const auto procs = processes_of(outcomes);
  const auto inten = intensity_report(procs, cfg.window);
  const auto zone = zone_report(outcomes, cfg.n, cfg.eps_zone);
  emit_report(os, "realcase", cfg,
              json{{"law", law_json(law, outcomes.size())},
                   {"intensity", intensity_json(inten)},
                   {"zone",
                    {{"eps_zone", zone.eps_zone},
                     {"half_width", zone.half_width},
                     {"threshold", zone.threshold},
                     {"fraction", zone.fraction},
                     {"min_value", zone.min_value},
                     {"trials", zone.trials}}}});
  Thresholds th(cfg);
  law_checks(th, law);
  th.at_most("intensity_rel_tol", inten.rel_error);
  th.at_most("zone_frac_max", zone.fraction);
  return th.status();
}

int cmd_bench(const RunConfig& cfg, const CommonOptions&, std::ostream& os) {
  const auto rows = bench(cfg);
  if (cfg.format == OutputFormat::Csv) {
    csv_header(os, "bench", cfg);
    os << "n,N,direct_ms,transform_ms,speedup,op_ratio,max_abs_diff\n";
  } else {
    os << header_json("bench", cfg).dump() << '\n';
  }
  for (const auto& r : rows) {
    if (cfg.format == OutputFormat::Csv)
      os << r.n << ',' << r.N << ',' << fmt(r.direct_ms) << ',' << fmt(r.transform_ms) << ',' << fmt(r.speedup) << ','
         << fmt(r.op_ratio) << ',' << fmt(r.max_abs_diff) << '\n';
    else
      os << json{{"n", r.n},
                 {"N", r.N},
                 {"direct_ms", r.direct_ms},
                 {"transform_ms", r.transform_ms},
                 {"speedup", r.speedup},
                 {"op_ratio", r.op_ratio},
                 {"max_abs_diff", r.max_abs_diff}}
                .dump()
         << '\n';
  }
  Thresholds th(cfg);
  if (!rows.empty()) th.at_least("speedup_min", rows.back().speedup);
  return th.status();
}

using Command = int (*)(const RunConfig&, const CommonOptions&, std::ostream&);

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum modulus of random trigonometric polynomials"};
  app.require_subcommand(1);

  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"simulate", "per-trial minima, law of n*m_n", cmd_simulate},
      {"intensity", "mean count of near-minima in a window", cmd_intensity},
      {"poisson", "dispersion, void probability and count covariance", cmd_poisson},
      {"perturb", "shift statistics under the perturbation coupling", cmd_perturb},
      {"separation", "fraction of trials with two close near-minima", cmd_separation},
      {"kernel-check", "closed-form kernel against direct sums", cmd_kernel_check},
      {"realcase", "real coefficients with exclusion-zone diagnostics", cmd_realcase},
      {"bench", "direct vs transform net evaluation timings", cmd_bench},
  };

  CommonOptions opts;
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, opts);
    if (name == "simulate") sub->add_flag("--survival", opts.survival, "emit the survival curve instead of trials");
    subs.emplace_back(sub, fn);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  for (const auto& [sub, fn] : subs) {
    if (!sub->parsed()) continue;
    try {
      const RunConfig cfg = build_config(sub->get_name(), sub, opts);
      Sink sink(cfg.output);
      const int status = fn(cfg, opts, sink.out());
      sink.finish();
      return status;
    } catch (const ConfigError& e) {
      std::cerr << "invalid config: " << e.what() << '\n';
      return kConfig;
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid config: " << e.what() << '\n';
      return kConfig;
    } catch (const OutputError& e) {
      std::cerr << "output error: " << e.what() << '\n';
      return kOutput;
    } catch (const std::exception& e) {
      std::cerr << "numeric failure: " << e.what() << '\n';
      return kNumeric;
    }
  }
  return kUsage;
}
