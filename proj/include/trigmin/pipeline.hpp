#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "trigmin/config.hpp"
#include "trigmin/extremal.hpp"
#include "trigmin/perturb.hpp"
#include "trigmin/realcase.hpp"
#include "trigmin/stats.hpp"

namespace trigmin {

/// fn(i) for i in [0, count) on `workers` threads. Results come back in
/// index order, so the caller's reduction never sees the schedule. If any
/// call throws, the exception of the lowest failing index is rethrown.
template <typename F>
auto parallel_map(std::size_t count, unsigned workers, F&& fn) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(count);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr err;

  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  return out;
}

Net make_net(const RunConfig& cfg);
EventThresholds make_thresholds(const RunConfig& cfg);
TrigPolynomiald sample_polynomial(const CoefficientModel& model, int n, TrialStream& stream);

enum class TrialMode { Standard, RealCase };

struct TrialOutcome {
  std::uint64_t trial = 0;
  int n = 0;
  GlobalMinResult gm;
  NearMinimaProcess process;  ///< restricted to the stationary range in RealCase mode
  CaptureCheck capture;
  std::size_t count_in_window = 0;
  double zone_min = std::numeric_limits<double>::quiet_NaN();  ///< RealCase only

  double scaled_min() const { return static_cast<double>(n) * gm.m; }
};

TrialOutcome run_trial(const RunConfig& cfg, const Net& net, const EventThresholds& th, std::uint64_t trial,
                       TrialMode mode);

/// All cfg.trials trials. RealCase mode expects a real model and n >= 64.
std::vector<TrialOutcome> run_trials(const RunConfig& cfg, unsigned workers, TrialMode mode = TrialMode::Standard);

std::vector<NearMinimaProcess> processes_of(const std::vector<TrialOutcome>& outcomes);
std::vector<double> scaled_minima(const std::vector<TrialOutcome>& outcomes);

struct CaptureMiss {
  std::uint64_t trial = 0;
  std::string reason;
};

struct LawReport {
  KsResult ks;
  double mean_scaled_min = 0.0;
  std::size_t captured = 0;
  std::size_t excused = 0;
  double capture_rate = 0.0;  ///< captured / trials
  std::size_t zero_slope = 0;
  std::vector<CaptureMiss> misses;
};

LawReport law_report(const std::vector<TrialOutcome>& outcomes);

struct IntensityReport {
  Interval window;
  double estimate = 0.0;
  double reference = 0.0;  ///< sqrt(pi/3) * |window|
  double rel_error = 0.0;
  std::size_t trials = 0;
};

IntensityReport intensity_report(std::span<const NearMinimaProcess> processes, Interval window);

struct PoissonReport {
  PoissonDiagnostics counts;      ///< dispersion and void probability on the void interval
  PoissonDiagnostics covariance;  ///< counts on the two covariance intervals
  double void_reference = 0.0;    ///< exp(-sqrt(pi/3) |void interval|)
};

PoissonReport poisson_report(std::span<const NearMinimaProcess> processes, const RunConfig& cfg);

struct SeparationReport {
  double eps = 0.0;
  double distance = 0.0;
  double fraction = 0.0;
  std::size_t trials = 0;
};

SeparationReport separation_report(std::span<const NearMinimaProcess> processes, int n, double eps);

struct ZoneReport {
  double eps_zone = 0.0;
  double half_width = 0.0;
  double threshold = 0.0;  ///< log(n) / n
  double fraction = 0.0;   ///< trials with zone minimum <= threshold
  double min_value = 0.0;
  std::size_t trials = 0;
};

ZoneReport zone_report(const std::vector<TrialOutcome>& outcomes, int n, double eps_zone);

/// Coupled perturbation trials, matched at cfg.K. `control` uses Phat = P.
std::vector<PerturbTrial> run_perturb_trials(const RunConfig& cfg, unsigned workers, bool control = false);

struct KernelCheckRow {
  double x = 0.0;
  double r_closed = 0.0, r_sum = 0.0;
  double r1_closed = 0.0, r1_sum = 0.0;
  double r2_closed = 0.0, r2_sum = 0.0;
  double abs_error = 0.0;  ///< max of the three absolute differences
};

/// Closed-form kernel against long-double direct sums at cfg.kernel_points
/// random angles plus fixed points around the Taylor switch.
std::vector<KernelCheckRow> kernel_check(const RunConfig& cfg);

struct BenchRow {
  int n = 0;
  Eigen::Index N = 0;
  double direct_ms = 0.0;
  double transform_ms = 0.0;
  double speedup = 0.0;
  double op_ratio = 0.0;  ///< 2nN / (N log2 N)
  double max_abs_diff = 0.0;
};

/// Per-net wall time of Horner evaluation at every net point against one
/// transform, N = 2^bench_log2_min .. 2^bench_log2_max.
std::vector<BenchRow> bench(const RunConfig& cfg);

} // namespace trigmin
