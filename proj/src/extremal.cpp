#include "trigmin/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "trigmin/errors.hpp"

namespace trigmin {

LinearMin linear_min(std::complex<double> A, std::complex<double> B) {
  const double b2 = std::norm(B);
  if (b2 == 0.0) throw DegenerateSlope("linear_min: zero slope");
  const std::complex<double> ab = A * std::conj(B);
  return {-ab.real() / b2, ab.imag() / std::sqrt(b2)};
}

EventThresholds EventThresholds::defaults(int n, double eps_event, double C0) {
  if (n < 2) throw ParameterError("event thresholds need n >= 2 (log n > 0)");
  const double dn = static_cast<double>(n);
  const double logn = std::log(dn);
  EventThresholds th;
  th.zmax = logn;
  th.amax = 1.0 / std::sqrt(dn);
  th.bmin = std::pow(dn, 1.0 - eps_event / 2.0);
  th.bmax = C0 * dn * std::sqrt(logn);
  th.C0 = C0;
  th.eps_event = eps_event;
  th.validate();
  return th;
}

void EventThresholds::validate() const {
  if (!(zmax > 0.0) || !(amax > 0.0)) throw ParameterError("thresholds: zmax and amax must be positive");
  if (!(bmin > 0.0 && bmin < bmax)) throw ParameterError("thresholds: need 0 < bmin < bmax");
}

bool make_candidate(std::complex<double> A, std::complex<double> B, Eigen::Index alpha, const Net& net,
                    const EventThresholds& th, int n, CandidateRecord& out) {
  if (B == std::complex<double>(0.0, 0.0)) return false;
  const LinearMin lm = linear_min(A, B);
  out.alpha = alpha;
  out.x_alpha = net.x_alpha(alpha);
  out.A = A;
  out.B = B;
  out.t = lm.t;
  out.Z = static_cast<double>(n) * lm.z;
  out.aprime = std::abs(lm.t) <= net.half_width() && std::abs(out.Z) <= th.zmax;
  const double absB = std::abs(B);
  out.adprime = std::abs(A) <= th.amax && absB >= th.bmin && absB <= th.bmax;
  return true;
}

std::size_t NearMinimaProcess::count_in(double a, double b) const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [&](const CandidateRecord& c) { return c.Z >= a && c.Z < b; }));
}

const CandidateRecord* NearMinimaProcess::min_abs() const {
  const CandidateRecord* best = nullptr;
  for (const auto& c : points)
    if (!best || std::abs(c.Z) < std::abs(best->Z)) best = &c;
  return best;
}

NearMinimaProcess extract_process(const Eigen::VectorXcd& p_vals, const Eigen::VectorXcd& p1_vals, const Net& net,
                                  const EventThresholds& th, int n) {
  if (p_vals.size() != net.N || p1_vals.size() != net.N)
    throw ParameterError("extract_process: net vectors must have length N");
  NearMinimaProcess proc;
  CandidateRecord rec;
  const double amax2 = th.amax * th.amax;
  for (Eigen::Index pos = 0; pos < net.N; ++pos) {
    const auto A = p_vals[pos];
    // Cheap reject: A'' needs |A| <= amax.
    if (std::norm(A) > amax2) {
      if (p1_vals[pos] == std::complex<double>(0.0, 0.0)) ++proc.zero_slope;
      continue;
    }
    if (!make_candidate(A, p1_vals[pos], net.alpha_of(pos), net, th, n, rec)) {
      ++proc.zero_slope;
      continue;
    }
    if (rec.flagged()) proc.points.push_back(rec);
  }
  return proc;
}

namespace {

struct Jet {
  std::complex<double> p, p1, p2;
};

/// P, P', P'' at x in one pass.
Jet eval_jet(const TrigPolynomiald& p, double x) {
  using C = std::complex<double>;
  const int n = p.degree();
  const C w = std::polar(1.0, x);
  detail::CompensatedSum<double> s0, s1, s2;
  s0 += p.coeff(0);
  C pw(1.0, 0.0);
  for (int j = 1; j <= n; ++j) {
    if (j % 32 == 0)
      pw = std::polar(1.0, x * j);
    else
      pw *= w;
    const double dj = j;
    const C plus = p.coeff(j) * pw;
    const C minus = p.coeff(-j) * std::conj(pw);
    s0 += plus;
    s0 += minus;
    s1 += C(0.0, dj) * (plus - minus);
    s2 += -dj * dj * (plus + minus);
  }
  const double k = p.normalization();
  return {k * s0.value(), k * s1.value(), k * s2.value()};
}

double dg(const Jet& j) { return 2.0 * (j.p * std::conj(j.p1)).real(); }
double d2g(const Jet& j) { return 2.0 * (std::norm(j.p1) + (j.p * std::conj(j.p2)).real()); }

struct Refined {
  double x;
  double value;
};

/// Minimum of |P| over [lo, hi]: safeguarded Newton on g' = (|P|^2)' when
/// g' changes sign, otherwise the better endpoint.
Refined refine_interval(const TrigPolynomiald& p, double lo, double hi, double x0, const GlobalMinOptions& opts) {
  const Jet jl = eval_jet(p, lo);
  const Jet jh = eval_jet(p, hi);
  const double gl = dg(jl), gh = dg(jh);
  Refined best = std::abs(jl.p) <= std::abs(jh.p) ? Refined{lo, std::abs(jl.p)} : Refined{hi, std::abs(jh.p)};
  if (!(gl < 0.0 && gh > 0.0)) {
    if (gl == 0.0 && gh == 0.0) {
      const Jet j0 = eval_jet(p, x0);
      if (std::abs(j0.p) < best.value) best = {x0, std::abs(j0.p)};
    }
    return best;
  }

  double a = lo, b = hi;
  double x = std::clamp(x0, lo, hi);
  const double xtol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
  for (int step = 0; step < opts.max_steps; ++step) {
    const Jet j = eval_jet(p, x);
    const double g1 = dg(j);
    if (std::abs(j.p) < best.value) best = {x, std::abs(j.p)};
    if (g1 == 0.0) return best;
    if (g1 < 0.0)
      a = x;
    else
      b = x;
    const double g2 = d2g(j);
    double next = g2 > 0.0 ? x - g1 / g2 : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double dx = std::abs(next - x);
    x = next;
    if (dx <= xtol || (b - a) <= xtol) {
      const Jet jf = eval_jet(p, x);
      if (std::abs(jf.p) < best.value) best = {x, std::abs(jf.p)};
      return best;
    }
  }
  std::ostringstream msg;
  msg << "global_min: no convergence in " << opts.max_steps << " steps on [" << lo << ", " << hi
      << "], bracket width " << (b - a);
  throw NumericFailure(msg.str());
}

} // namespace

double second_derivative_sup_bound(const TrigPolynomiald& p) {
  const int n = p.degree();
  const Eigen::Index M = 16 * static_cast<Eigen::Index>(n);
  const double sampled = evaluate_on_grid(p, M, 2).cwiseAbs().maxCoeff();
  // Any x is within pi/M of a sample and ||Q'|| <= n ||Q|| for a degree-n
  // trigonometric polynomial Q, so sup|P''| <= sampled + (n pi / M) sup|P''|.
  const double slack = static_cast<double>(n) * std::numbers::pi / static_cast<double>(M);
  return sampled / (1.0 - slack);
}

GlobalMinResult global_min(const TrigPolynomiald& p, const Eigen::VectorXcd& p_vals, const Eigen::VectorXcd& p1_vals,
                           const Net& net, const GlobalMinOptions& opts) {
  if (p_vals.size() != net.N || p1_vals.size() != net.N)
    throw ParameterError("global_min: net vectors must have length N");
  const double h = net.half_width();

  // Squared predicted local minimum per interval, t clamped to the interval;
  // keep the k_seed smallest in a max-heap.
  const auto k = static_cast<std::size_t>(std::max(opts.k_seed, 1));
  std::vector<std::pair<double, Eigen::Index>> heap;
  heap.reserve(k + 1);
  Eigen::Index net_best = 0;
  double net_best2 = std::norm(p_vals[0]);
  for (Eigen::Index pos = 0; pos < net.N; ++pos) {
    const auto A = p_vals[pos];
    const auto B = p1_vals[pos];
    const double a2 = std::norm(A);
    if (a2 < net_best2) {
      net_best2 = a2;
      net_best = pos;
    }
    double value = a2;
    const double b2 = std::norm(B);
    if (b2 > 0.0) {
      const double t = std::clamp(-(A * std::conj(B)).real() / b2, -h, h);
      value = std::norm(A + t * B);
    }
    if (heap.size() < k) {
      heap.emplace_back(value, pos);
      std::push_heap(heap.begin(), heap.end());
    } else if (value < heap.front().first) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = {value, pos};
      std::push_heap(heap.begin(), heap.end());
    }
  }
  std::sort_heap(heap.begin(), heap.end());

  std::vector<Eigen::Index> seeds;
  for (const auto& [value, pos] : heap) seeds.push_back(pos);
  if (std::find(seeds.begin(), seeds.end(), net_best) == seeds.end()) seeds.push_back(net_best);

  GlobalMinResult res;
  res.m = std::abs(p_vals[net_best]);
  res.argmin = net.x_at(net_best);
  for (const auto pos : seeds) {
    const double xa = net.x_at(pos);
    const auto A = p_vals[pos];
    const auto B = p1_vals[pos];
    double x0 = xa;
    if (B != std::complex<double>(0.0, 0.0)) x0 = xa + std::clamp(linear_min(A, B).t, -h, h);
    const Refined r = refine_interval(p, xa - h, xa + h, x0, opts);
    if (r.value < res.m) {
      res.m = r.value;
      res.argmin = r.x;
    }
  }
  res.argmin = wrap_angle(res.argmin);
  res.sup_p2 = second_derivative_sup_bound(p);
  res.certified_bound = res.sup_p2 * h * h / 2.0 + opts.tol_newton;
  return res;
}

CaptureCheck check_capture(const NearMinimaProcess& proc, const GlobalMinResult& gm, const Eigen::VectorXcd& p_vals,
                           const Eigen::VectorXcd& p1_vals, const Net& net, const EventThresholds& th, int n) {
  CaptureCheck out;
  const double nm = static_cast<double>(n) * gm.m;
  const CandidateRecord* best = proc.min_abs();
  if (best && std::abs(std::abs(best->Z) / n - gm.m) <= gm.certified_bound) {
    out.captured = true;
    return out;
  }
  if (!best && nm > th.zmax) {
    out.excused = true;
    out.reason = "empty process and n*m > zmax";
    return out;
  }

  // Explain through the interval that contains the argmin.
  const auto alpha = static_cast<Eigen::Index>(std::llround(gm.argmin / net.spacing()));
  const Eigen::Index pos = ((net.pos_of(alpha) % net.N) + net.N) % net.N;
  std::ostringstream why;
  why << "n*m=" << nm;
  if (best) why << " process min |X|=" << std::abs(best->Z);
  else why << " process empty";
  CandidateRecord rec;
  if (!make_candidate(p_vals[pos], p1_vals[pos], net.alpha_of(pos), net, th, n, rec)) {
    why << "; argmin interval has zero slope";
  } else {
    why << "; argmin interval alpha=" << rec.alpha;
    if (std::abs(rec.t) > net.half_width()) why << " t outside interval (|t|=" << std::abs(rec.t) << ")";
    if (std::abs(rec.Z) > th.zmax) why << " |Z|=" << std::abs(rec.Z) << " > zmax";
    if (std::abs(rec.A) > th.amax) why << " |P|=" << std::abs(rec.A) << " > amax";
    if (std::abs(rec.B) < th.bmin) why << " |P'|=" << std::abs(rec.B) << " < bmin=" << th.bmin;
    if (std::abs(rec.B) > th.bmax) why << " |P'|=" << std::abs(rec.B) << " > bmax=" << th.bmax;
    if (rec.flagged()) why << " flagged, but process min came from elsewhere";
  }
  out.reason = why.str();
  return out;
}

} // namespace trigmin
