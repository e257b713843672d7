#include "trigmin/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "trigmin/errors.hpp"
#include "trigmin/stats.hpp"

namespace trigmin {

TrigPolynomiald perturb_polynomial(const TrigPolynomiald& P, const TrigPolynomiald& Q) {
  if (P.degree() != Q.degree()) throw ParameterError("perturb_polynomial: degree mismatch");
  const int n = P.degree();
  if (n < 2) throw ParameterError("perturb_polynomial: n >= 2 required");
  const double inv_n = 1.0 / static_cast<double>(n);
  const double keep = std::sqrt(1.0 - inv_n * inv_n);
  return TrigPolynomiald(n, keep * P.coeffs() + inv_n * Q.coeffs());
}

PerturbTrial make_perturb_trial(const TrigPolynomiald& P, const TrigPolynomiald& Q, const TrigPolynomiald& Phat,
                                const Net& net, const EventThresholds& th) {
  const int n = P.degree();
  if (Q.degree() != n || Phat.degree() != n) throw ParameterError("make_perturb_trial: degree mismatch");
  PerturbTrial trial;
  trial.n = n;
  trial.procP = extract_process(evaluate_on_net(P, net, 0), evaluate_on_net(P, net, 1), net, th, n);
  trial.procPhat = extract_process(evaluate_on_net(Phat, net, 0), evaluate_on_net(Phat, net, 1), net, th, n);
  trial.q_at_points.reserve(trial.procP.points.size());
  for (const auto& c : trial.procP.points) trial.q_at_points.push_back(evaluate(Q, c.x_alpha, 0));
  return trial;
}

double match_window(int n) { return 1.0 / (8.0 * static_cast<double>(n)); }

void match_and_shift(PerturbTrial& trial, double K) {
  trial.matches.clear();
  trial.small_points = 0;
  trial.unmatched_small = 0;
  const auto& hat = trial.procPhat.points;
  const double window = match_window(trial.n);

  for (std::size_t i = 0; i < trial.procP.points.size(); ++i) {
    const auto& c = trial.procP.points[i];
    if (std::abs(c.Z) > K) continue;
    ++trial.small_points;

    bool partner = false;
    for (const auto& h : hat) {
      if (std::abs(h.Z) <= 2.0 * K && std::abs(wrap_angle(h.x_alpha - c.x_alpha)) <= window) {
        partner = true;
        break;
      }
    }
    if (!partner) ++trial.unmatched_small;

    // Points are sorted by alpha.
    const auto it = std::lower_bound(hat.begin(), hat.end(), c.alpha,
                                     [](const CandidateRecord& r, Eigen::Index a) { return r.alpha < a; });
    if (it == hat.end() || it->alpha != c.alpha) continue;

    MatchedShift m;
    m.alpha = c.alpha;
    m.X = c.Z;
    m.Xhat = it->Z;
    m.shift = it->Z - c.Z;
    // First-order change of n Im(A conj B)/|B| under A -> A + Q/n.
    m.predictor = (trial.q_at_points[i] * std::conj(c.B)).imag() / std::abs(c.B);
    m.residual = m.shift - m.predictor;
    trial.matches.push_back(m);
  }
}

InvarianceReport invariance_report(std::span<const PerturbTrial> trials, double K) {
  if (trials.size() < 100) throw ParameterError("invariance_report: need at least 100 trials");
  std::vector<double> xs, xhats, shifts;
  std::size_t small = 0, unmatched = 0;
  double res_max = 0.0;
  for (const auto& t : trials) {
    for (const auto& c : t.procP.points)
      if (std::abs(c.Z) <= K) xs.push_back(c.Z);
    for (const auto& c : t.procPhat.points)
      if (std::abs(c.Z) <= K) xhats.push_back(c.Z);
    for (const auto& m : t.matches) {
      shifts.push_back(m.shift);
      res_max = std::max(res_max, std::abs(m.residual) * std::sqrt(static_cast<double>(t.n)));
    }
    small += t.small_points;
    unmatched += t.unmatched_small;
  }
  if (shifts.empty()) throw ParameterError("invariance_report: no matched points");

  InvarianceReport r;
  r.trials = trials.size();
  r.matches = shifts.size();
  r.law_ks = (xs.empty() || xhats.empty()) ? 1.0 : ks_two_sample(xs, xhats).statistic;
  const auto mom = moments(shifts);
  r.shift_mean = mom.mean;
  r.shift_var = mom.variance;
  r.shift_ks_gauss = ks_normal(shifts, 0.0, 0.5).statistic;
  r.unmatched_frac = small ? static_cast<double>(unmatched) / static_cast<double>(small) : 0.0;
  r.residual_max_scaled = res_max;
  return r;
}

} // namespace trigmin
