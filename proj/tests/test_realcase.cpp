#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "trigmin/coeffs.hpp"
#include "trigmin/errors.hpp"
#include "trigmin/pipeline.hpp"
#include "trigmin/realcase.hpp"

using namespace trigmin;
using std::numbers::pi;

namespace {

TrigPolynomiald real_poly(int n, std::uint64_t seed, std::uint64_t trial) {
  auto s = derive_trial_stream({seed, trial});
  return TrigPolynomiald(n, sample_coefficients({ModelKind::RealGaussian}, n, s));
}

} // namespace

TEST_CASE("real correlations: exact values") {
  const auto c = real_correlations(64, 0.0, 0.0);
  CHECK(c.rr == 1.0);
  CHECK(c.ii == 0.0);
  CHECK(c.ri == 0.0);
  const int n = 256;
  const double w = zone_half_width(n, 0.5);
  for (double x : {w, 0.3, 1.0, 2.0, pi - w}) {
    const auto d = real_correlations(n, x, x);
    CHECK(std::abs(d.rr - 0.5) <= 0.02);
    CHECK(std::abs(d.ii - 0.5) <= 0.02);
    CHECK(d.ri == 0.0);
  }
}

TEST_CASE("real correlations against Monte Carlo") {
  const int n = 64, M = 100000;
  const std::vector<std::pair<double, double>> pts = {{0.3, 0.5}, {-1.0, 2.0}, {0.05, 0.07}};
  std::vector<std::array<double, 3>> acc(pts.size(), {0, 0, 0});
  for (int t = 0; t < M; ++t) {
    const auto T = real_poly(n, 60, t);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto a = evaluate(T, pts[k].first, 0), b = evaluate(T, pts[k].second, 0);
      acc[k][0] += a.real() * b.real();
      acc[k][1] += a.imag() * b.imag();
      acc[k][2] += a.real() * b.imag();
    }
  }
  const double tol = 4.0 / std::sqrt(double(M));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto c = real_correlations(n, pts[k].first, pts[k].second);
    CHECK(std::abs(acc[k][0] / M - c.rr) <= tol);
    CHECK(std::abs(acc[k][1] / M - c.ii) <= tol);
    CHECK(std::abs(acc[k][2] / M - c.ri) <= tol);
  }
}

TEST_CASE("real polynomials: conjugate symmetry and a real value at 0") {
  const auto T = real_poly(100, 61, 0);
  for (double x : {0.1, 1.0, 2.5}) CHECK(std::abs(evaluate(T, -x, 0) - std::conj(evaluate(T, x, 0))) <= 1e-13);
  CHECK(std::abs(evaluate(T, 0.0, 0).imag()) <= 1e-14);
  const auto z = exclusion_zone_min(T, 0.25);
  CHECK(z.near_zero <= std::abs(evaluate(T, 0.0, 0)) + 1e-15);
  CHECK(z.value() == std::min(z.near_zero, z.near_pi));
}

TEST_CASE("zone minimum of the Dirichlet shape sits on the zone boundary") {
  const int n = 256;
  const double eps = 0.1;
  const double w = zone_half_width(n, eps);
  REQUIRE(w < 2 * pi / (2 * n + 1));  // the zone lies inside the main lobe
  const TrigPolynomiald T(n, Eigen::VectorXcd::Ones(2 * n + 1));
  const auto z = exclusion_zone_min(T, eps);
  CHECK(std::abs(std::abs(z.argmin_zero) - w) <= 1e-12);
  CHECK(z.near_zero == doctest::Approx(std::abs(evaluate(T, w, 0))).epsilon(1e-12));

  // Independent dense scans of both zones.
  for (double center : {0.0, pi}) {
    double best = 1e300;
    const int K = 200000;
    for (int k = 0; k <= K; ++k) best = std::min(best, std::abs(evaluate(T, center - w + 2 * w * k / K, 0)));
    const double got = center == 0.0 ? z.near_zero : z.near_pi;
    CHECK(got <= best + 1e-12);
    CHECK(got >= best - 1e-6);
  }
}

TEST_CASE("zone parameters and errors") {
  CHECK(zone_grid_points(256, 0.25) == 1024);
  CHECK(zone_grid_points(1 << 20, 0.5) == 65536);
  CHECK_THROWS_AS(zone_half_width(256, 0.0), ParameterError);
  CHECK_THROWS_AS(zone_half_width(256, 1.0), ParameterError);
  auto s = derive_trial_stream({62, 0});
  const TrigPolynomiald complex_poly(16, sample_coefficients({}, 16, s));
  CHECK_THROWS_AS(exclusion_zone_min(complex_poly, 0.25), ParameterError);
}

TEST_CASE("restriction removes exactly the zone points") {
  const int n = 64;
  const Net net = build_net(n, 0.5);
  const double eps = 0.5, w = zone_half_width(n, eps);
  NearMinimaProcess all;
  for (Eigen::Index pos = 0; pos < net.N; ++pos) {
    CandidateRecord c;
    c.alpha = net.alpha_of(pos);
    c.x_alpha = net.x_at(pos);
    all.points.push_back(c);
  }
  const auto kept = restrict_to_stationary_range(all, n, eps);
  std::size_t removed = 0;
  for (const auto& c : all.points) {
    const double y = std::abs(c.x_alpha);
    const bool zone = y < w || pi - y < w;
    if (zone) ++removed;
    const bool present = std::any_of(kept.points.begin(), kept.points.end(),
                                     [&](const CandidateRecord& k) { return k.alpha == c.alpha; });
    CHECK(present == !zone);
  }
  CHECK(kept.points.size() + removed == all.points.size());
  CHECK(removed > 0);
}

TEST_CASE("real pipeline shares the complex code path") {
  RunConfig cfg;
  cfg.n = 64;
  cfg.model.kind = ModelKind::RealGaussian;
  const Net net = make_net(cfg);
  const auto th = make_thresholds(cfg);
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto a = run_trial(cfg, net, th, t, TrialMode::Standard);
    const auto b = run_trial(cfg, net, th, t, TrialMode::RealCase);
    CHECK(a.gm.m == b.gm.m);
    CHECK(a.gm.argmin == b.gm.argmin);
    CHECK(std::isnan(a.zone_min));
    CHECK(b.zone_min >= 0.0);
    const auto r = restrict_to_stationary_range(a.process, cfg.n, cfg.eps_zone);
    REQUIRE(r.points.size() == b.process.points.size());
    for (std::size_t i = 0; i < r.points.size(); ++i) CHECK(r.points[i].alpha == b.process.points[i].alpha);
  }
  RunConfig bad = cfg;
  bad.model.kind = ModelKind::ComplexGaussian;
  bad.trials = 1;
  CHECK_THROWS_AS(run_trials(bad, 1, TrialMode::RealCase), InvalidModel);
  bad.model.kind = ModelKind::RealGaussian;
  bad.n = 32;
  CHECK_THROWS_AS(run_trials(bad, 1, TrialMode::RealCase), ParameterError);
}
