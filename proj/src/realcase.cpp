#include "trigmin/realcase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trigmin/errors.hpp"

namespace trigmin {

RealCorrelations real_correlations(int n, double x, double y) {
  const double rm = kernel<double>(n, x - y).r;
  const double rp = kernel<double>(n, x + y).r;
  return {0.5 * (rm + rp), 0.5 * (rm - rp), 0.0};
}

double zone_half_width(int n, double eps_zone) {
  if (!(eps_zone > 0.0 && eps_zone < 1.0)) throw ParameterError("eps_zone must lie in (0,1)");
  return std::pow(static_cast<double>(n), -1.0 + eps_zone);
}

bool in_exclusion_zone(double x, int n, double eps_zone) {
  const double w = zone_half_width(n, eps_zone);
  const double y = std::abs(wrap_angle(x));
  return y < w || std::numbers::pi - y < w;
}

long zone_grid_points(int n, double eps_zone) {
  return std::max(1024L, static_cast<long>(std::ceil(64.0 * std::pow(static_cast<double>(n), eps_zone))));
}

namespace {

struct ZoneScan {
  double value;
  double x;
};

ZoneScan scan_zone(const TrigPolynomiald& T, double center, double w, long points) {
  const auto modulus = [&](double x) { return std::abs(evaluate(T, x, 0)); };
  const double step = 2.0 * w / static_cast<double>(points - 1);
  long best = 0;
  double best_v = modulus(center - w);
  for (long k = 1; k < points; ++k) {
    const double v = modulus(center - w + step * static_cast<double>(k));
    if (v < best_v) {
      best_v = v;
      best = k;
    }
  }
  // Golden section on the bracket around the best sample, kept inside the zone.
  double a = std::max(center - w, center - w + step * static_cast<double>(best - 1));
  double b = std::min(center + w, center - w + step * static_cast<double>(best + 1));
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = modulus(c), fd = modulus(d);
  while (b - a > 1e-13) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = modulus(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = modulus(d);
    }
  }
  const double xm = 0.5 * (a + b);
  const double vm = modulus(xm);
  if (vm < best_v) return {vm, xm};
  return {best_v, center - w + step * static_cast<double>(best)};
}

} // namespace

ZoneMin exclusion_zone_min(const TrigPolynomiald& T, double eps_zone) {
  if (!T.has_real_coeffs()) throw ParameterError("exclusion_zone_min: T must have real coefficients");
  const int n = T.degree();
  const double w = zone_half_width(n, eps_zone);
  const long points = zone_grid_points(n, eps_zone);
  const auto z0 = scan_zone(T, 0.0, w, points);
  const auto zp = scan_zone(T, std::numbers::pi, w, points);
  return {z0.value, z0.x, zp.value, wrap_angle(zp.x)};
}

NearMinimaProcess restrict_to_stationary_range(const NearMinimaProcess& proc, int n, double eps_zone) {
  NearMinimaProcess out;
  out.zero_slope = proc.zero_slope;
  for (const auto& c : proc.points)
    if (!in_exclusion_zone(c.x_alpha, n, eps_zone)) out.points.push_back(c);
  return out;
}

} // namespace trigmin
