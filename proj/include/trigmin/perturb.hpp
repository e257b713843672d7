#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "trigmin/extremal.hpp"
#include "trigmin/neteval.hpp"
#include "trigmin/poly.hpp"

namespace trigmin {

/// sqrt(1 - 1/n^2) P + (1/n) Q, coefficientwise. Needs matching degrees
/// and n >= 2 (n = 1 discards P entirely).
TrigPolynomiald perturb_polynomial(const TrigPolynomiald& P, const TrigPolynomiald& Q);

/// One point of P's process together with its partner at the same alpha.
struct MatchedShift {
  Eigen::Index alpha = 0;
  double X = 0.0;
  double Xhat = 0.0;
  double shift = 0.0;      ///< Xhat - X
  double predictor = 0.0;  ///< Im(Q(x) conj P'(x)) / |P'(x)|
  double residual = 0.0;   ///< shift - predictor
};

/// Coupled pair of near-minima processes of P and of its perturbation.
///
/// The polynomials themselves are not retained; only what the matching
/// needs (processes and Q at the points of P's process).
struct PerturbTrial {
  int n = 0;
  NearMinimaProcess procP;
  NearMinimaProcess procPhat;
  std::vector<std::complex<double>> q_at_points;  ///< Q(x_alpha), aligned with procP.points
  std::vector<MatchedShift> matches;
  std::size_t small_points = 0;     ///< points of procP with |X| <= K
  std::size_t unmatched_small = 0;  ///< of those, without a partner near alpha with |Xhat| <= 2K
};

/// Extract both processes and Q at P's points. Phat is passed explicitly so
/// that controls (Phat = P) go through the same path.
PerturbTrial make_perturb_trial(const TrigPolynomiald& P, const TrigPolynomiald& Q, const TrigPolynomiald& Phat,
                                const Net& net, const EventThresholds& th);

/// Half-width, in radians, of the neighbourhood searched for a partner
/// point when counting unmatched points: 1/(8n).
double match_window(int n);

/// Fill trial.matches (same alpha flagged in both processes, |X| <= K) and
/// the unmatched counters.
void match_and_shift(PerturbTrial& trial, double K);

struct InvarianceReport {
  double law_ks = 0.0;         ///< two-sample KS of pooled X vs pooled Xhat, both restricted to [-K, K]
  double shift_mean = 0.0;
  double shift_var = 0.0;
  double shift_ks_gauss = 0.0; ///< KS of shifts vs N(0, 1/2)
  double unmatched_frac = 0.0;
  double residual_max_scaled = 0.0;  ///< sqrt(n) max |shift - predictor|
  std::size_t matches = 0;
  std::size_t trials = 0;
};

/// Needs >= 100 trials with match_and_shift applied; throws when there is
/// not a single match.
InvarianceReport invariance_report(std::span<const PerturbTrial> trials, double K);

} // namespace trigmin
