#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trigmin/neteval.hpp"
#include "trigmin/poly.hpp"

namespace trigmin {

/// Closest approach of the line s -> A + s B to the origin.
struct LinearMin {
  double t = 0.0;  ///< minimizing s, -Re(A conj B) / |B|^2
  double z = 0.0;  ///< signed distance, Im(A conj B) / |B|; |A + tB| = |z|
};

/// Throws DegenerateSlope when B = 0.
LinearMin linear_min(std::complex<double> A, std::complex<double> B);

/// Thresholds of the candidate events.
///
/// A'  : |t| <= pi/N and |Z| <= zmax
/// A'' : |P(x)| <= amax and bmin <= |P'(x)| <= bmax
struct EventThresholds {
  double zmax = 0.0;
  double amax = 0.0;
  double bmin = 0.0;
  double bmax = 0.0;
  double C0 = 10.0;
  double eps_event = 1.0;

  /// zmax = log n, amax = n^{-1/2}, bmin = n^{1 - eps_event/2},
  /// bmax = C0 n sqrt(log n).
  static EventThresholds defaults(int n, double eps_event = 1.0, double C0 = 10.0);
  void validate() const;
};

struct CandidateRecord {
  Eigen::Index alpha = 0;
  double x_alpha = 0.0;
  std::complex<double> A;  ///< P(x_alpha)
  std::complex<double> B;  ///< P'(x_alpha)
  double t = 0.0;          ///< predicted minimizer, offset from x_alpha
  double Z = 0.0;          ///< n * signed minimal modulus of the linear model
  bool aprime = false;
  bool adprime = false;

  double position() const { return x_alpha + t; }
  bool flagged() const { return aprime && adprime; }
};

/// Evaluate the candidate events at one net point. Returns false when
/// P'(x_alpha) = 0 (no line, no candidate).
bool make_candidate(std::complex<double> A, std::complex<double> B, Eigen::Index alpha, const Net& net,
                    const EventThresholds& th, int n, CandidateRecord& out);

/// Flagged candidates of one polynomial, ascending in alpha.
struct NearMinimaProcess {
  std::vector<CandidateRecord> points;
  std::size_t zero_slope = 0;  ///< intervals skipped because |P'(x_alpha)| = 0

  /// Number of points with X in [a, b).
  std::size_t count_in(double a, double b) const;
  /// Point with smallest |X|, or nullptr for an empty process.
  const CandidateRecord* min_abs() const;
};

NearMinimaProcess extract_process(const Eigen::VectorXcd& p_vals, const Eigen::VectorXcd& p1_vals, const Net& net,
                                  const EventThresholds& th, int n);

struct GlobalMinOptions {
  int k_seed = 16;
  double tol_newton = 1e-12;
  int max_steps = 100;
};

struct GlobalMinResult {
  double m = 0.0;
  double argmin = 0.0;
  double certified_bound = 0.0;  ///< true minimum lies in [m - certified_bound, m]
  double sup_p2 = 0.0;           ///< upper bound on sup |P''| used in the certificate
};

/// Upper bound on sup_x |P''(x)| from a 16n-point sample and Bernstein's
/// inequality between samples.
double second_derivative_sup_bound(const TrigPolynomiald& p);

/// Global minimum of |P| seeded from the net and refined by safeguarded
/// Newton on |P|^2. Scans every interval; no event filtering.
GlobalMinResult global_min(const TrigPolynomiald& p, const Eigen::VectorXcd& p_vals, const Eigen::VectorXcd& p1_vals,
                           const Net& net, const GlobalMinOptions& opts = {});

/// Did the process minimum reproduce n * m_n? `reason` explains a miss.
struct CaptureCheck {
  bool captured = false;
  bool excused = false;  ///< empty process with n*m > zmax
  std::string reason;
};

CaptureCheck check_capture(const NearMinimaProcess& proc, const GlobalMinResult& gm, const Eigen::VectorXcd& p_vals,
                           const Eigen::VectorXcd& p1_vals, const Net& net, const EventThresholds& th, int n);

} // namespace trigmin
