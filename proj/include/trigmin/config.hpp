#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trigmin/coeffs.hpp"
#include "trigmin/stats.hpp"

namespace trigmin {

enum class OutputFormat { Csv, Jsonl };

/// Everything that determines a run's output. Worker count is deliberately
/// not part of it: results never depend on it.
///
/// Serializes to flat `key=value` lines; `parse(serialize(c)) == c`.
struct RunConfig {
  CoefficientModel model;
  int n = 256;
  double eps_net = 0.01;
  double eps_event = 1.0;
  double C0 = 10.0;
  bool round_to_pow2 = true;
  int trials = 20000;
  std::uint64_t seed = 0;
  double K = 3.0;
  double tau_step = 0.05;
  int tau_count = 101;
  Interval window{-2.0, 2.0};
  Interval void_interval{-1.0, 1.0};
  Interval cov_left{-2.0, 0.0};
  Interval cov_right{0.0, 2.0};
  double eps_sep = 0.5;
  double eps_zone = 0.01;
  int k_seed = 16;
  int kernel_points = 1000;
  int bench_log2_min = 12;
  int bench_log2_max = 17;
  OutputFormat format = OutputFormat::Csv;
  std::string output = "-";
  /// Optional acceptance thresholds, keyed by name (see `known_accept_keys`).
  std::map<std::string, double> accept;

  std::vector<double> tau_grid() const;

  /// Throws ParameterError / InvalidModel when a field is out of range.
  void validate() const;

  /// Set one field from its textual form; throws ParameterError on an
  /// unknown key or malformed value.
  void set(const std::string& key, const std::string& value);

  /// (key, value) pairs in a fixed order, accept.* last.
  std::vector<std::pair<std::string, std::string>> items() const;

  std::string serialize() const;
  static RunConfig parse(std::string_view text);

  bool operator==(const RunConfig&) const = default;
};

const std::vector<std::string>& known_accept_keys();

std::string format_double(double v);

} // namespace trigmin
