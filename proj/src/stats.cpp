#include "trigmin/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trigmin/errors.hpp"
#include "trigmin/poly.hpp"

namespace trigmin {

double exponential_rate() { return 2.0 * std::sqrt(std::numbers::pi / 3.0); }
double limit_intensity() { return std::sqrt(std::numbers::pi / 3.0); }

std::vector<double> default_tau_grid() {
  std::vector<double> taus(101);
  for (int k = 0; k <= 100; ++k) taus[k] = 0.05 * k;
  return taus;
}

SurvivalCurve empirical_survival(std::span<const double> samples, std::span<const double> taus, double lambda) {
  if (samples.empty()) throw ParameterError("empirical_survival: no samples");
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (taus[k] < 0.0) throw ParameterError("empirical_survival: taus must be >= 0");
    if (k > 0 && !(taus[k] > taus[k - 1])) throw ParameterError("empirical_survival: taus must increase");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  SurvivalCurve out;
  out.M = sorted.size();
  const double M = static_cast<double>(out.M);
  for (const double tau : taus) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), tau) - sorted.begin();
    out.taus.push_back(tau);
    out.empirical.push_back(static_cast<double>(static_cast<std::ptrdiff_t>(out.M) - below) / M);
    out.reference.push_back(std::exp(-lambda * tau));
  }
  return out;
}

KsResult ks_against_cdf(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ParameterError("ks: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t M = sorted.size();
  const double dM = static_cast<double>(M);
  double d = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double F = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / dM - F, F - static_cast<double>(i) / dM});
  }
  return {d, M, 1.358 / std::sqrt(dM)};
}

KsResult ks_exponential(std::span<const double> samples, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("ks_exponential: lambda must be positive");
  for (const double s : samples)
    if (s < 0.0) throw ParameterError("ks_exponential: negative sample");
  return ks_against_cdf(samples, [lambda](double t) { return -std::expm1(-lambda * t); });
}

KsResult ks_normal(std::span<const double> samples, double mean, double variance) {
  if (!(variance > 0.0)) throw ParameterError("ks_normal: variance must be positive");
  const double scale = std::sqrt(2.0 * variance);
  return ks_against_cdf(samples, [=](double x) { return 0.5 * std::erfc(-(x - mean) / scale); });
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ParameterError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double m_eff = na * nb / (na + nb);
  return {d, static_cast<std::size_t>(m_eff), 1.358 / std::sqrt(m_eff)};
}

double intensity_estimate(std::span<const NearMinimaProcess> processes, double a, double b) {
  if (!(a < b)) throw ParameterError("intensity_estimate: need a < b");
  if (processes.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& p : processes) total += p.count_in(a, b);
  return static_cast<double>(total) / static_cast<double>(processes.size());
}

PoissonDiagnostics poisson_diagnostics(std::span<const NearMinimaProcess> processes, Interval i1, Interval i2) {
  if (processes.size() < 2) throw ParameterError("poisson_diagnostics: need at least two trials");
  if (!(i1.lo < i1.hi) || !(i2.lo < i2.hi)) throw ParameterError("poisson_diagnostics: empty interval");
  if (i1.lo < i2.hi && i2.lo < i1.hi) throw ParameterError("poisson_diagnostics: intervals overlap");

  const std::size_t M = processes.size();
  const double dM = static_cast<double>(M);
  std::vector<double> c1(M), c2(M);
  for (std::size_t k = 0; k < M; ++k) {
    c1[k] = static_cast<double>(processes[k].count_in(i1.lo, i1.hi));
    c2[k] = static_cast<double>(processes[k].count_in(i2.lo, i2.hi));
  }
  const auto m1 = moments(c1);
  const auto m2 = moments(c2);

  PoissonDiagnostics out;
  out.interval = i1;
  out.other = i2;
  out.M = M;
  out.mean_count = m1.mean;
  out.var_count = m1.variance;
  out.dispersion = m1.mean > 0.0 ? m1.variance / m1.mean : 0.0;
  out.void_prob = static_cast<double>(std::count(c1.begin(), c1.end(), 0.0)) / dM;

  std::vector<double> prod(M);
  for (std::size_t k = 0; k < M; ++k) prod[k] = (c1[k] - m1.mean) * (c2[k] - m2.mean);
  const auto mp = moments(prod);
  out.covariance = mp.mean * dM / (dM - 1.0);
  out.covariance_se = std::sqrt(mp.variance / dM);
  return out;
}

bool has_close_pair(const NearMinimaProcess& proc, double dist) {
  const auto& pts = proc.points;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(wrap_angle(pts[i].x_alpha - pts[j].x_alpha)) <= dist) return true;
  return false;
}

double separation_statistic(std::span<const NearMinimaProcess> processes, int n, double eps) {
  if (processes.empty()) return 0.0;
  const double dist = std::pow(static_cast<double>(n), -eps);
  const auto hits = std::count_if(processes.begin(), processes.end(),
                                  [dist](const NearMinimaProcess& p) { return has_close_pair(p, dist); });
  return static_cast<double>(hits) / static_cast<double>(processes.size());
}

SampleMoments moments(std::span<const double> samples) {
  SampleMoments m;
  if (samples.empty()) return m;
  // Sorted two-pass sums, so the result does not depend on trial order.
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  const double k = static_cast<double>(v.size());
  double sum = 0.0;
  for (const double x : v) sum += x;
  m.mean = sum / k;
  std::vector<double> sq(v.size());
  std::transform(v.begin(), v.end(), sq.begin(), [&](double x) { return (x - m.mean) * (x - m.mean); });
  std::sort(sq.begin(), sq.end());
  double ss = 0.0;
  for (const double x : sq) ss += x;
  m.variance = v.size() > 1 ? ss / (k - 1.0) : 0.0;
  return m;
}

} // namespace trigmin
