#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "trigmin/extremal.hpp"

namespace trigmin {

/// Limiting exponential rate 2 sqrt(pi/3) of n * m_n.
double exponential_rate();
/// Limiting intensity sqrt(pi/3) of the near-minima process.
double limit_intensity();

/// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x < hi; }
  bool operator==(const Interval&) const = default;
};

struct SurvivalCurve {
  std::vector<double> taus;
  std::vector<double> empirical;  ///< fraction of samples >= tau
  std::vector<double> reference;  ///< exp(-lambda tau)
  std::size_t M = 0;
};

/// Default grid tau = 0.05 k, k = 0..100.
std::vector<double> default_tau_grid();

SurvivalCurve empirical_survival(std::span<const double> samples, std::span<const double> taus,
                                 double lambda = exponential_rate());

struct KsResult {
  double statistic = 0.0;
  std::size_t M = 0;
  double critical_95 = 0.0;  ///< asymptotic 1.358 / sqrt(M_eff)

  bool passes_95() const { return statistic <= critical_95; }
};

/// One-sample KS distance against a continuous CDF, exact at the jumps.
KsResult ks_against_cdf(std::span<const double> samples, const std::function<double(double)>& cdf);

/// KS distance of non-negative samples to Exp(lambda).
KsResult ks_exponential(std::span<const double> samples, double lambda);

/// KS distance to N(mean, variance).
KsResult ks_normal(std::span<const double> samples, double mean, double variance);

/// Two-sample KS distance; critical value uses M_eff = ab/(a+b).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Average number of points with X in [a, b) per process.
double intensity_estimate(std::span<const NearMinimaProcess> processes, double a, double b);

struct PoissonDiagnostics {
  Interval interval;
  Interval other;
  double mean_count = 0.0;
  double var_count = 0.0;
  double dispersion = 0.0;
  double void_prob = 0.0;
  double covariance = 0.0;      ///< sample covariance of counts on `interval` and `other`
  double covariance_se = 0.0;   ///< standard error of that covariance
  std::size_t M = 0;
};

/// Count statistics on I1 and the covariance of counts on I1, I2.
/// Throws ParameterError for overlapping intervals or fewer than two trials.
PoissonDiagnostics poisson_diagnostics(std::span<const NearMinimaProcess> processes, Interval i1, Interval i2);

/// True if two points of the process sit on net points at circular
/// distance <= dist.
bool has_close_pair(const NearMinimaProcess& proc, double dist);

/// Fraction of processes with two points within n^{-eps} of each other.
double separation_statistic(std::span<const NearMinimaProcess> processes, int n, double eps);

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
};

SampleMoments moments(std::span<const double> samples);

} // namespace trigmin
