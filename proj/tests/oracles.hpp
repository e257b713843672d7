#pragma once

// Slow reference implementations shared by the unit and acceptance tests.
// Nothing here goes through the library's fast paths except where noted.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "trigmin/neteval.hpp"
#include "trigmin/poly.hpp"

namespace oracle {

struct KernelSums {
  double r, r1, r2;
};

/// (2n+1)^{-1} sum_j e^{-ijx} and its x-derivatives, summed in long double.
inline KernelSums kernel_sums(int n, double x) {
  long double s0 = 1.0L, s1 = 0.0L, s2 = 0.0L;
  for (int j = 1; j <= n; ++j) {
    const long double jl = j, a = jl * static_cast<long double>(x);
    s0 += 2.0L * std::cos(a);
    s1 -= 2.0L * jl * std::sin(a);
    s2 -= 2.0L * jl * jl * std::cos(a);
  }
  const long double d = 2.0L * n + 1.0L;
  return {static_cast<double>(s0 / d), static_cast<double>(s1 / d), static_cast<double>(s2 / d)};
}

/// Naive sum of (ij)^order c_j e^{ijx} / sqrt(2n+1) with explicit powers,
/// in long double.
inline std::complex<double> direct(const trigmin::TrigPolynomiald& p, double x, int order) {
  const int n = p.degree();
  std::complex<long double> acc = 0;
  for (int j = -n; j <= n; ++j) {
    std::complex<long double> f = 1;
    for (int k = 0; k < order; ++k) f *= std::complex<long double>(0, j);
    const long double a = static_cast<long double>(j) * x;
    const std::complex<double> c = p.coeff(j);
    acc += f * std::complex<long double>(c.real(), c.imag()) * std::complex<long double>(std::cos(a), std::sin(a));
  }
  acc /= std::sqrt(2.0L * n + 1.0L);
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

inline trigmin::TrigPolynomiald random_poly(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Eigen::VectorXcd c(2 * n + 1);
  for (auto& v : c) v = {g(rng), g(rng)};
  return trigmin::TrigPolynomiald(n, c);
}

struct BruteMin {
  double m;
  double argmin;
};

/// min |P| from a 4096n-point grid, then golden section (to 1e-12) around
/// the 16 smallest local minima of the grid.
inline BruteMin brute_min(const trigmin::TrigPolynomiald& p) {
  const int n = p.degree();
  const Eigen::Index M = 4096 * static_cast<Eigen::Index>(n);
  const Eigen::VectorXd a = trigmin::evaluate_on_grid(p, M, 0).cwiseAbs();
  const double h = 2.0 * std::numbers::pi / static_cast<double>(M);

  std::vector<Eigen::Index> locmins;
  for (Eigen::Index k = 0; k < M; ++k)
    if (a[k] <= a[(k + M - 1) % M] && a[k] <= a[(k + 1) % M]) locmins.push_back(k);
  std::sort(locmins.begin(), locmins.end(), [&](auto i, auto j) { return a[i] < a[j]; });
  if (locmins.size() > 16) locmins.resize(16);

  const auto f = [&](double x) { return std::abs(trigmin::evaluate(p, x, 0)); };
  BruteMin best{a.minCoeff(), 0.0};
  for (Eigen::Index k = 0; k < M; ++k)
    if (a[k] == best.m) best.argmin = h * static_cast<double>(k);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (auto k : locmins) {
    double lo = h * (static_cast<double>(k) - 1), hi = h * (static_cast<double>(k) + 1);
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > 1e-12) {
      if (fc < fd) {
        hi = d; d = c; fd = fc; c = hi - g * (hi - lo); fc = f(c);
      } else {
        lo = c; c = d; fc = fd; d = lo + g * (hi - lo); fd = f(d);
      }
    }
    const double xm = 0.5 * (lo + hi), v = f(xm);
    if (v < best.m) best = {v, xm};
  }
  return best;
}

} // namespace oracle
