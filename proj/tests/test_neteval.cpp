#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "trigmin/neteval.hpp"

using namespace trigmin;

TEST_CASE("build_net sizes") {
  CHECK(build_net(256, 0.01).N == 65536);
  // 256^{1.99} = 2^{15.92}
  const double target = std::exp2(8.0 * 1.99);
  CHECK(build_net(256, 0.01, false).N == 2 * static_cast<Eigen::Index>(std::floor(target / 2.0)));
  CHECK(build_net(256, 0.01, false).N % 2 == 0);
  CHECK(build_net(64, 0.5).N >= static_cast<Eigen::Index>(std::pow(64.0, 1.5)));
  CHECK_THROWS_AS(build_net(4, 0.9), ParameterError);
  CHECK_THROWS_AS(build_net(8, 0.0), ParameterError);
}

TEST_CASE("net geometry") {
  const Net net = build_net(16, 0.5);
  CHECK(net.x_at(0) == doctest::Approx(-std::numbers::pi));
  CHECK(net.x_at(net.N / 2) == 0.0);
  CHECK(net.half_width() == doctest::Approx(std::numbers::pi / net.N));
  for (Eigen::Index a : {-net.N / 2, Eigen::Index(0), net.N / 2 - 1}) CHECK(net.alpha_of(net.pos_of(a)) == a);
}

TEST_CASE("frequency slots for n = 1, N = 8") {
  Eigen::VectorXcd c(3);
  c << std::complex<double>(1, 2), std::complex<double>(-0.5, 0.25), std::complex<double>(3, -1);
  const TrigPolynomiald p(1, c);
  Net net;
  net.n = 1;
  net.N = 8;
  const auto v = evaluate_on_net(p, net, 0);
  CHECK(std::abs(v[net.pos_of(0)] - c.sum() / std::sqrt(3.0)) < 1e-15);
  for (Eigen::Index pos = 0; pos < 8; ++pos) CHECK(std::abs(v[pos] - oracle::direct(p, net.x_at(pos), 0)) < 1e-14);
}

TEST_CASE("net values equal direct evaluation everywhere (n <= 64, N <= 4096)") {
  std::mt19937_64 rng(10);
  for (int n : {1, 2, 3, 5, 9, 17, 33, 64}) {
    const auto p = oracle::random_poly(n, rng);
    const double cmax = p.coeffs().cwiseAbs().maxCoeff();
    for (Eigen::Index N = 4; N <= 4096; N *= 2) {
      if (N <= 2 * n) continue;
      Net net;
      net.n = n;
      net.N = N;
      for (int order = 0; order <= 2; ++order) {
        const auto v = evaluate_on_net(p, net, order);
        double worst = 0.0;
        for (Eigen::Index pos = 0; pos < N; ++pos)
          worst = std::max(worst, std::abs(v[pos] - oracle::direct(p, net.x_at(pos), order)));
        CAPTURE(n);
        CAPTURE(N);
        CAPTURE(order);
        CHECK(worst <= 1e-9 * (1.0 + cmax) * std::pow(double(n), order));
      }
    }
  }
}

TEST_CASE("net values at random alphas for a large net") {
  std::mt19937_64 rng(11);
  const int n = 256;
  const auto p = oracle::random_poly(n, rng);
  const Net net = build_net(n, 0.01);
  std::uniform_int_distribution<Eigen::Index> pick(-net.N / 2, net.N / 2 - 1);
  const double cmax = p.coeffs().cwiseAbs().maxCoeff();
  for (int order = 0; order <= 1; ++order) {
    const auto v = evaluate_on_net(p, net, order);
    for (int k = 0; k < 64; ++k) {
      const auto a = pick(rng);
      CHECK(std::abs(v[net.pos_of(a)] - evaluate(p, net.x_alpha(a), order)) <=
            1e-9 * (1.0 + cmax) * std::pow(double(n), order));
    }
  }
}

TEST_CASE("net evaluation is linear") {
  std::mt19937_64 rng(12);
  const auto p = oracle::random_poly(20, rng), q = oracle::random_poly(20, rng);
  const TrigPolynomiald s(20, p.coeffs() + q.coeffs());
  const Net net = build_net(20, 0.2);
  const auto d = evaluate_on_net(s, net, 1) - evaluate_on_net(p, net, 1) - evaluate_on_net(q, net, 1);
  CHECK(d.cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("long double grid path agrees with the double path") {
  std::mt19937_64 rng(13);
  const auto p = oracle::random_poly(30, rng);
  const TrigPolynomial<long double> q(30, p.coeffs().cast<std::complex<long double>>());
  const auto a = evaluate_on_grid(p, 256, 1);
  const auto b = evaluate_on_grid(q, 256, 1);
  for (Eigen::Index k = 0; k < 256; ++k)
    CHECK(std::abs(a[k] - std::complex<double>(double(b[k].real()), double(b[k].imag()))) <= 1e-10);
}

TEST_CASE("slot collisions are rejected") {
  std::mt19937_64 rng(14);
  const auto p = oracle::random_poly(8, rng);
  CHECK_THROWS_AS(evaluate_on_grid(p, 16, 0), ParameterError);
  CHECK_NOTHROW(evaluate_on_grid(p, 17, 0));
  CHECK_THROWS_AS(evaluate_on_grid(p, 64, 3), ParameterError);
}
