#include "trigmin/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "trigmin/errors.hpp"

namespace trigmin {

Net make_net(const RunConfig& cfg) { return build_net(cfg.n, cfg.eps_net, cfg.round_to_pow2); }

EventThresholds make_thresholds(const RunConfig& cfg) {
  auto th = EventThresholds::defaults(cfg.n, cfg.eps_event, cfg.C0);
  th.validate();
  return th;
}

TrigPolynomiald sample_polynomial(const CoefficientModel& model, int n, TrialStream& stream) {
  return TrigPolynomiald(n, sample_coefficients(model, n, stream));
}

TrialOutcome run_trial(const RunConfig& cfg, const Net& net, const EventThresholds& th, std::uint64_t trial,
                       TrialMode mode) {
  auto stream = derive_trial_stream({cfg.seed, trial});
  const auto P = sample_polynomial(cfg.model, cfg.n, stream);
  const auto v0 = evaluate_on_net(P, net, 0);
  const auto v1 = evaluate_on_net(P, net, 1);

  TrialOutcome out;
  out.trial = trial;
  out.n = cfg.n;
  GlobalMinOptions opts;
  opts.k_seed = cfg.k_seed;
  out.gm = global_min(P, v0, v1, net, opts);
  out.process = extract_process(v0, v1, net, th, cfg.n);
  out.capture = check_capture(out.process, out.gm, v0, v1, net, th, cfg.n);
  if (mode == TrialMode::RealCase) {
    out.zone_min = exclusion_zone_min(P, cfg.eps_zone).value();
    out.process = restrict_to_stationary_range(out.process, cfg.n, cfg.eps_zone);
  }
  out.count_in_window = out.process.count_in(cfg.window.lo, cfg.window.hi);
  return out;
}

std::vector<TrialOutcome> run_trials(const RunConfig& cfg, unsigned workers, TrialMode mode) {
  cfg.validate();
  if (mode == TrialMode::RealCase) {
    if (cfg.model.kind != ModelKind::RealGaussian) throw InvalidModel("real-case runs need model.kind=real");
    if (cfg.n < 64) throw ParameterError("real-case runs need n >= 64");
  }
  const Net net = make_net(cfg);
  const EventThresholds th = make_thresholds(cfg);
  return parallel_map(static_cast<std::size_t>(cfg.trials), workers,
                      [&](std::size_t i) { return run_trial(cfg, net, th, i, mode); });
}

std::vector<NearMinimaProcess> processes_of(const std::vector<TrialOutcome>& outcomes) {
  std::vector<NearMinimaProcess> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) out.push_back(o.process);
  return out;
}

std::vector<double> scaled_minima(const std::vector<TrialOutcome>& outcomes) {
  std::vector<double> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) out.push_back(o.scaled_min());
  return out;
}

LawReport law_report(const std::vector<TrialOutcome>& outcomes) {
  if (outcomes.empty()) throw ParameterError("law_report: no trials");
  LawReport r;
  const auto nm = scaled_minima(outcomes);
  r.ks = ks_exponential(nm, exponential_rate());
  r.mean_scaled_min = moments(nm).mean;
  for (const auto& o : outcomes) {
    if (o.capture.captured) {
      ++r.captured;
    } else {
      if (o.capture.excused) ++r.excused;
      r.misses.push_back({o.trial, o.capture.reason});
    }
    r.zero_slope += o.process.zero_slope;
  }
  r.capture_rate = static_cast<double>(r.captured) / static_cast<double>(outcomes.size());
  return r;
}

IntensityReport intensity_report(std::span<const NearMinimaProcess> processes, Interval window) {
  IntensityReport r;
  r.window = window;
  r.trials = processes.size();
  r.estimate = intensity_estimate(processes, window.lo, window.hi);
  r.reference = limit_intensity() * window.length();
  r.rel_error = std::abs(r.estimate - r.reference) / r.reference;
  return r;
}

PoissonReport poisson_report(std::span<const NearMinimaProcess> processes, const RunConfig& cfg) {
  PoissonReport r;
  // The companion interval only feeds the (unused) covariance of this call.
  const Interval companion{cfg.void_interval.hi, cfg.void_interval.hi + cfg.void_interval.length()};
  r.counts = poisson_diagnostics(processes, cfg.void_interval, companion);
  r.covariance = poisson_diagnostics(processes, cfg.cov_left, cfg.cov_right);
  r.void_reference = std::exp(-limit_intensity() * cfg.void_interval.length());
  return r;
}

SeparationReport separation_report(std::span<const NearMinimaProcess> processes, int n, double eps) {
  SeparationReport r;
  r.eps = eps;
  r.distance = std::pow(static_cast<double>(n), -eps);
  r.fraction = separation_statistic(processes, n, eps);
  r.trials = processes.size();
  return r;
}

ZoneReport zone_report(const std::vector<TrialOutcome>& outcomes, int n, double eps_zone) {
  ZoneReport r;
  r.eps_zone = eps_zone;
  r.half_width = zone_half_width(n, eps_zone);
  r.threshold = std::log(static_cast<double>(n)) / static_cast<double>(n);
  r.trials = outcomes.size();
  r.min_value = std::numeric_limits<double>::infinity();
  std::size_t hits = 0;
  for (const auto& o : outcomes) {
    if (std::isnan(o.zone_min)) throw ParameterError("zone_report: outcome without zone minimum");
    if (o.zone_min <= r.threshold) ++hits;
    r.min_value = std::min(r.min_value, o.zone_min);
  }
  r.fraction = outcomes.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(outcomes.size());
  return r;
}

std::vector<PerturbTrial> run_perturb_trials(const RunConfig& cfg, unsigned workers, bool control) {
  cfg.validate();
  const Net net = make_net(cfg);
  const EventThresholds th = make_thresholds(cfg);
  return parallel_map(static_cast<std::size_t>(cfg.trials), workers, [&](std::size_t i) {
    auto stream = derive_trial_stream({cfg.seed, i});
    const auto P = sample_polynomial(cfg.model, cfg.n, stream);
    const auto Q = sample_polynomial(cfg.model, cfg.n, stream);
    auto trial = control ? make_perturb_trial(P, Q, P, net, th)
                         : make_perturb_trial(P, Q, perturb_polynomial(P, Q), net, th);
    match_and_shift(trial, cfg.K);
    return trial;
  });
}

namespace {

KernelCheckRow kernel_row(int n, double x) {
  const auto k = kernel<double>(n, x);
  long double s0 = 1.0L, s1 = 0.0L, s2 = 0.0L;
  const long double xl = x;
  for (int j = 1; j <= n; ++j) {
    const long double jl = j;
    const long double c = std::cos(jl * xl), s = std::sin(jl * xl);
    s0 += 2.0L * c;
    s1 -= 2.0L * jl * s;
    s2 -= 2.0L * jl * jl * c;
  }
  const long double norm = 2.0L * n + 1.0L;
  KernelCheckRow row;
  row.x = x;
  row.r_closed = k.r;
  row.r_sum = static_cast<double>(s0 / norm);
  row.r1_closed = k.r1;
  row.r1_sum = static_cast<double>(s1 / norm);
  row.r2_closed = k.r2;
  row.r2_sum = static_cast<double>(s2 / norm);
  row.abs_error = std::max({std::abs(row.r_closed - row.r_sum), std::abs(row.r1_closed - row.r1_sum),
                            std::abs(row.r2_closed - row.r2_sum)});
  return row;
}

} // namespace

std::vector<KernelCheckRow> kernel_check(const RunConfig& cfg) {
  if (cfg.n < 1) throw ParameterError("kernel_check: n >= 1 required");
  if (cfg.kernel_points < 1) throw ParameterError("kernel_check: kernel.points >= 1 required");
  const int n = cfg.n;
  const double pi = std::numbers::pi;
  const double sw = kernel_series_switch<double>(n);
  std::vector<double> xs = {0.0, 1e-9, sw * (1 - 1e-12), sw, sw * (1 + 1e-12), -sw * (1 - 1e-12), -sw * (1 + 1e-12),
                            1.0 / n, 2.0 * pi / (2 * n + 1), pi / 2, pi};
  auto stream = derive_trial_stream({cfg.seed, 0});
  for (int k = 0; k < cfg.kernel_points; ++k) xs.push_back(pi * (2.0 * stream.uniform() - 1.0));
  std::vector<KernelCheckRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) rows.push_back(kernel_row(n, x));
  return rows;
}

std::vector<BenchRow> bench(const RunConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const int n = cfg.n;
  auto stream = derive_trial_stream({cfg.seed, 0});
  const auto P = sample_polynomial(cfg.model, n, stream);
  const auto& c = P.coeffs();
  const double norm = P.normalization();

  std::vector<BenchRow> rows;
  for (int lg = cfg.bench_log2_min; lg <= cfg.bench_log2_max; ++lg) {
    const Eigen::Index N = Eigen::Index(1) << lg;
    if (N <= 2 * static_cast<Eigen::Index>(n)) continue;
    Net net;
    net.n = n;
    net.N = N;

    // Horner in z = e^{ix}: 2n complex multiply-adds per point.
    Eigen::VectorXcd direct(N);
    const auto t0 = clock::now();
    for (Eigen::Index pos = 0; pos < N; ++pos) {
      const double x = net.x_at(pos);
      const std::complex<double> z = std::polar(1.0, x);
      std::complex<double> acc = c[2 * n];
      for (int k = 2 * n - 1; k >= 0; --k) acc = acc * z + c[k];
      direct[pos] = norm * acc * std::polar(1.0, -static_cast<double>(n) * x);
    }
    const double direct_s = std::chrono::duration<double>(clock::now() - t0).count();

    Eigen::VectorXcd fast = evaluate_on_net(P, net, 0);  // warm-up builds the plan
    int reps = 0;
    const auto t1 = clock::now();
    double fast_s = 0.0;
    do {
      fast = evaluate_on_net(P, net, 0);
      ++reps;
      fast_s = std::chrono::duration<double>(clock::now() - t1).count();
    } while (fast_s < 0.05 && reps < 1000);

    BenchRow row;
    row.n = n;
    row.N = N;
    row.direct_ms = direct_s * 1e3;
    row.transform_ms = fast_s * 1e3 / reps;
    row.speedup = row.direct_ms / row.transform_ms;
    row.op_ratio = 2.0 * n / static_cast<double>(lg);
    row.max_abs_diff = (direct - fast).cwiseAbs().maxCoeff();
    rows.push_back(row);
  }
  return rows;
}

} // namespace trigmin
