#include "trigmin/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "trigmin/errors.hpp"

namespace trigmin {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) throw ParameterError("config: bad number for " + key + ": '" + v + "'");
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) throw ParameterError("config: bad integer for " + key + ": '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParameterError("config: bad boolean for " + key + ": '" + v + "'");
}

Interval to_interval(const std::string& key, const std::string& v) {
  const auto comma = v.find(',');
  if (comma == std::string::npos) throw ParameterError("config: interval " + key + " must be 'lo,hi'");
  return {to_double(key, trim(v.substr(0, comma))), to_double(key, trim(v.substr(comma + 1)))};
}

std::string interval_str(Interval i) { return format_double(i.lo) + "," + format_double(i.hi); }

} // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const std::vector<std::string>& known_accept_keys() {
  static const std::vector<std::string> keys = {
      "ks_max",         "intensity_rel_tol", "dispersion_min", "dispersion_max", "void_target",
      "void_tol",       "cov_se_max",        "capture_min",    "shift_var_min",  "shift_var_max",
      "shift_ks_max",   "law_ks_max",        "unmatched_max",  "separation_max", "zone_frac_max",
      "kernel_err_max", "speedup_min"};
  return keys;
}

std::vector<double> RunConfig::tau_grid() const {
  std::vector<double> taus(static_cast<std::size_t>(tau_count));
  for (int k = 0; k < tau_count; ++k) taus[k] = tau_step * k;
  return taus;
}

void RunConfig::validate() const {
  if (n < 1) throw ParameterError("config: n must be >= 1");
  model.validate(n);
  if (!(eps_net > 0.0 && eps_net < 1.0)) throw ParameterError("config: eps_net must lie in (0,1)");
  if (!(eps_event > 0.0 && eps_event < 2.0)) throw ParameterError("config: eps_event must lie in (0,2)");
  if (!(C0 > 0.0)) throw ParameterError("config: C0 must be positive");
  if (trials < 1) throw ParameterError("config: trials must be >= 1");
  if (!(K > 0.0)) throw ParameterError("config: K must be positive");
  if (!(tau_step > 0.0) || tau_count < 1) throw ParameterError("config: tau grid must be non-empty and increasing");
  for (const auto* i : {&window, &void_interval, &cov_left, &cov_right})
    if (!(i->lo < i->hi)) throw ParameterError("config: intervals need lo < hi");
  if (cov_left.lo < cov_right.hi && cov_right.lo < cov_left.hi)
    throw ParameterError("config: covariance intervals must be disjoint");
  if (!(eps_sep > 0.0)) throw ParameterError("config: eps_sep must be positive");
  if (!(eps_zone > 0.0 && eps_zone < 1.0)) throw ParameterError("config: eps_zone must lie in (0,1)");
  if (k_seed < 1) throw ParameterError("config: k_seed must be >= 1");
  if (kernel_points < 1) throw ParameterError("config: kernel.points must be >= 1");
  if (bench_log2_min < 1 || bench_log2_max < bench_log2_min || bench_log2_max > 26)
    throw ParameterError("config: bench log2 range invalid");
  for (const auto& [k, v] : accept)
    if (std::find(known_accept_keys().begin(), known_accept_keys().end(), k) == known_accept_keys().end())
      throw ParameterError("config: unknown acceptance key accept." + k);
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "model.kind") model.kind = parse_model_kind(v);
  else if (key == "model.delta") model.delta = to_double(key, v);
  else if (key == "model.base") model.base = parse_cramer_base(v);
  else if (key == "n") n = to_int<int>(key, v);
  else if (key == "eps_net") eps_net = to_double(key, v);
  else if (key == "eps_event") eps_event = to_double(key, v);
  else if (key == "C0") C0 = to_double(key, v);
  else if (key == "round_to_pow2") round_to_pow2 = to_bool(key, v);
  else if (key == "trials") trials = to_int<int>(key, v);
  else if (key == "seed") seed = to_int<std::uint64_t>(key, v);
  else if (key == "K") K = to_double(key, v);
  else if (key == "tau.step") tau_step = to_double(key, v);
  else if (key == "tau.count") tau_count = to_int<int>(key, v);
  else if (key == "window") window = to_interval(key, v);
  else if (key == "poisson.void") void_interval = to_interval(key, v);
  else if (key == "poisson.left") cov_left = to_interval(key, v);
  else if (key == "poisson.right") cov_right = to_interval(key, v);
  else if (key == "eps_sep") eps_sep = to_double(key, v);
  else if (key == "eps_zone") eps_zone = to_double(key, v);
  else if (key == "k_seed") k_seed = to_int<int>(key, v);
  else if (key == "kernel.points") kernel_points = to_int<int>(key, v);
  else if (key == "bench.log2_min") bench_log2_min = to_int<int>(key, v);
  else if (key == "bench.log2_max") bench_log2_max = to_int<int>(key, v);
  else if (key == "format") {
    if (v == "csv") format = OutputFormat::Csv;
    else if (v == "jsonl") format = OutputFormat::Jsonl;
    else throw ParameterError("config: format must be csv or jsonl");
  } else if (key == "output") output = v;
  else if (key.rfind("accept.", 0) == 0) {
    const std::string name = key.substr(7);
    if (std::find(known_accept_keys().begin(), known_accept_keys().end(), name) == known_accept_keys().end())
      throw ParameterError("config: unknown acceptance key " + key);
    accept[name] = to_double(key, v);
  } else {
    throw ParameterError("config: unknown key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::items() const {
  std::vector<std::pair<std::string, std::string>> out = {
      {"model.kind", to_string(model.kind)},
      {"model.delta", format_double(model.delta)},
      {"model.base", to_string(model.base)},
      {"n", std::to_string(n)},
      {"eps_net", format_double(eps_net)},
      {"eps_event", format_double(eps_event)},
      {"C0", format_double(C0)},
      {"round_to_pow2", round_to_pow2 ? "true" : "false"},
      {"trials", std::to_string(trials)},
      {"seed", std::to_string(seed)},
      {"K", format_double(K)},
      {"tau.step", format_double(tau_step)},
      {"tau.count", std::to_string(tau_count)},
      {"window", interval_str(window)},
      {"poisson.void", interval_str(void_interval)},
      {"poisson.left", interval_str(cov_left)},
      {"poisson.right", interval_str(cov_right)},
      {"eps_sep", format_double(eps_sep)},
      {"eps_zone", format_double(eps_zone)},
      {"k_seed", std::to_string(k_seed)},
      {"kernel.points", std::to_string(kernel_points)},
      {"bench.log2_min", std::to_string(bench_log2_min)},
      {"bench.log2_max", std::to_string(bench_log2_max)},
      {"format", format == OutputFormat::Csv ? "csv" : "jsonl"},
      {"output", output},
  };
  for (const auto& [k, v] : accept) out.emplace_back("accept." + k, format_double(v));
  return out;
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  for (const auto& [k, v] : items()) os << k << '=' << v << '\n';
  return os.str();
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig c;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key=value");
    c.set(trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return c;
}

} // namespace trigmin
