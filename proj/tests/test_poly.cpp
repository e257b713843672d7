#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "trigmin/coeffs.hpp"
#include "trigmin/poly.hpp"

using namespace trigmin;
using std::numbers::pi;

namespace {

TrigPolynomiald make(int n, std::initializer_list<std::complex<double>> c) {
  Eigen::VectorXcd v(c.size());
  int i = 0;
  for (auto x : c) v[i++] = x;
  return TrigPolynomiald(n, v);
}

} // namespace

TEST_CASE("evaluate: small exact cases") {
  CHECK(std::abs(evaluate(make(1, {1, 0, 1}), pi / 2, 0)) < 1e-15);
  CHECK(std::abs(evaluate(make(1, {0, 1, 0}), 0.7, 1)) == 0.0);
  CHECK(std::abs(evaluate(make(1, {0, 1, 0}), 0.7, 0) - 1.0 / std::sqrt(3.0)) < 1e-15);
}

TEST_CASE("evaluate: second derivative against finite differences") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const auto p = oracle::random_poly(2, rng);
    const double h = 1e-5;
    const auto fd = (evaluate(p, h, 0) - 2.0 * evaluate(p, 0.0, 0) + evaluate(p, -h, 0)) / (h * h);
    const auto d2 = evaluate(p, 0.0, 2);
    CHECK(std::abs(fd - d2) <= 1e-5 * std::abs(d2) + 1e-6);
  }
}

TEST_CASE("evaluate: matches naive sums and is 2 pi periodic") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int n : {1, 5, 64, 300}) {
    const auto p = oracle::random_poly(n, rng);
    for (int k = 0; k < 20; ++k) {
      const double x = u(rng);
      for (int order = 0; order <= 2; ++order) {
        const auto v = evaluate(p, x, order);
        const double scale = std::pow(double(n), order) * (1.0 + p.coeffs().cwiseAbs().maxCoeff());
        CHECK(std::abs(v - oracle::direct(p, x, order)) <= 1e-12 * scale);
      }
      const auto a = evaluate(p, x, 0), b = evaluate(p, x + 2 * pi, 0);
      CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)) * n);
    }
  }
}

TEST_CASE("kernel: exact values") {
  CHECK(kernel(1, pi).r == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(kernel(1, pi / 2).r == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  for (int n : {1, 2, 17, 256}) {
    const auto k = kernel(n, 0.0);
    CHECK(k.r == 1.0);
    CHECK(k.r1 == 0.0);
    CHECK(-k.r2 / (k.sigma_n * k.sigma_n) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("sigma_n") {
  CHECK(sigma_n(1) == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(sigma_n(2) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("kernel closed forms match direct sums to 1e-10") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int n : {1, 2, 3, 7, 31, 64, 100, 255, 256, 511, 512}) {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double x = k < 20 ? (k - 10) * kernel_series_switch<double>(n) * 0.3 : u(rng);
      const auto c = kernel(n, x);
      const auto s = oracle::kernel_sums(n, x);
      worst = std::max({worst, std::abs(c.r - s.r), std::abs(c.r1 - s.r1), std::abs(c.r2 - s.r2)});
    }
    CAPTURE(n);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("kernel branches agree at the series switch") {
  for (int n = 1; n <= 512; n += (n < 16 ? 1 : 37)) {
    const double sw = kernel_series_switch<double>(n);
    const double sig = sigma_n(n);
    for (double sgn : {-1.0, 1.0}) {
      const auto in = kernel(n, sgn * sw * (1 - 1e-13));
      const auto out = kernel(n, sgn * sw * (1 + 1e-13));
      CAPTURE(n);
      CHECK(std::abs(in.r - out.r) <= 1e-9);
      CHECK(std::abs(in.r1 - out.r1) / sig <= 1e-9);
      CHECK(std::abs(in.r2 - out.r2) / (sig * sig) <= 1e-9);
    }
  }
}

TEST_CASE("kernel: leading-order expansion at large n") {
  // r = 1 - (nx)^2/6 + (nx)^4/120 up to O((nx)^2/n + (nx)^6). For r'' the
  // power sums give sum j^4 / sum j^2 -> 3n^2/5, so -r''/sigma^2 = 1 - 3(nx)^2/10.
  const int n = 512;
  const double sig = sigma_n(n);
  for (double u : {0.01, 0.05, 0.1, 0.2}) {
    const double x = u / n;
    const auto k = kernel(n, x);
    const double tol = 2.0 * u * u / n + u * u * u * u * u * u;
    CHECK(std::abs(k.r - (1 - u * u / 6 + u * u * u * u / 120)) <= tol);
    CHECK(std::abs(k.r1 / sig - (-u / std::sqrt(3.0) + u * u * u / (10 * std::sqrt(3.0)))) <= 2.0 * u / n + u * u * u * u * u);
    CHECK(std::abs(-k.r2 / (sig * sig) - (1 - 3 * u * u / 10)) <= 2.0 / n + u * u * u * u);
  }
}

TEST_CASE("kernel symmetries") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int n : {1, 4, 64, 257}) {
    for (int k = 0; k < 200; ++k) {
      const double x = u(rng);
      const auto a = kernel(n, x), b = kernel(n, -x), c = kernel(n, x + 2 * pi);
      const double s2 = a.sigma_n * a.sigma_n;
      CHECK(std::abs(a.r - b.r) <= 1e-12);
      CHECK(std::abs(a.r1 + b.r1) <= 1e-12 * a.sigma_n);
      CHECK(std::abs(a.r2 - b.r2) <= 1e-12 * s2);
      CHECK(std::abs(a.r - c.r) <= 1e-12);
      CHECK(std::abs(a.r) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("stationarity and derivative variance under the complex model") {
  const CoefficientModel model;
  {
    const int n = 32, M = 20000;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-pi, pi);
    std::vector<double> xs(16);
    for (auto& x : xs) x = u(rng);
    std::vector<double> acc(16, 0.0);
    for (int t = 0; t < M; ++t) {
      auto s = derive_trial_stream({6, static_cast<std::uint64_t>(t)});
      const TrigPolynomiald p(n, sample_coefficients(model, n, s));
      for (int i = 0; i < 16; ++i) acc[i] += std::norm(evaluate(p, xs[i], 0));
    }
    for (double a : acc) CHECK(std::abs(a / M - 1.0) <= 4.0 / std::sqrt(double(M)));
  }
  {
    const int n = 256, M = 100000;
    double acc = 0.0;
    for (int t = 0; t < M; ++t) {
      auto s = derive_trial_stream({9, static_cast<std::uint64_t>(t)});
      const TrigPolynomiald p(n, sample_coefficients(model, n, s));
      acc += std::norm(evaluate(p, 0.0, 1));
    }
    const double target = n * (n + 1) / 3.0;
    CHECK(std::abs(acc / M / target - 1.0) <= 0.02);
  }
}

TEST_CASE("long double evaluation agrees with double") {
  std::mt19937_64 rng(7);
  const auto p = oracle::random_poly(40, rng);
  const TrigPolynomial<long double> q(40, p.coeffs().cast<std::complex<long double>>());
  for (double x : {-2.0, 0.1, 1.3}) {
    const auto a = evaluate(p, x, 1);
    const auto b = evaluate(q, static_cast<long double>(x), 1);
    CHECK(std::abs(a - std::complex<double>(double(b.real()), double(b.imag()))) <= 1e-12 * 40 * 10);
  }
}

TEST_CASE("bad inputs") {
  CHECK_THROWS_AS(TrigPolynomiald(0, Eigen::VectorXcd(1)), ParameterError);
  CHECK_THROWS_AS(TrigPolynomiald(2, Eigen::VectorXcd(4)), ParameterError);
  CHECK_THROWS_AS(sigma_n(0), ParameterError);
}
