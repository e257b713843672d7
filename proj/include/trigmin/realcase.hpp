#pragma once

#include "trigmin/extremal.hpp"
#include "trigmin/poly.hpp"

namespace trigmin {

/// Covariances of R = Re T and I = Im T for real Gaussian coefficients.
struct RealCorrelations {
  double rr = 0.0;  ///< E[R(x) R(y)] = (r(x-y) + r(x+y)) / 2
  double ii = 0.0;  ///< E[I(x) I(y)] = (r(x-y) - r(x+y)) / 2
  double ri = 0.0;  ///< E[R(x) I(y)], identically zero
};

RealCorrelations real_correlations(int n, double x, double y);

/// Half-width n^{-1+eps_zone} of the zones around 0 and pi where T is far
/// from stationary.
double zone_half_width(int n, double eps_zone);

/// Whether x lies within the zone half-width of 0 or of pi.
bool in_exclusion_zone(double x, int n, double eps_zone);

struct ZoneMin {
  double near_zero = 0.0;
  double argmin_zero = 0.0;
  double near_pi = 0.0;
  double argmin_pi = 0.0;

  double value() const { return near_zero < near_pi ? near_zero : near_pi; }
};

/// Number of grid points per zone: max(1024, 64 n^{eps_zone}).
long zone_grid_points(int n, double eps_zone);

/// min |T| over each zone: dense scan, then golden-section refinement
/// around the best sample.
ZoneMin exclusion_zone_min(const TrigPolynomiald& T, double eps_zone);

/// Drop points whose x_alpha lies inside either zone.
NearMinimaProcess restrict_to_stationary_range(const NearMinimaProcess& proc, int n, double eps_zone);

} // namespace trigmin
