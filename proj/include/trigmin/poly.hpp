#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "trigmin/errors.hpp"

namespace trigmin {

/// P(x) = (2n+1)^{-1/2} sum_{j=-n}^{n} c_j e^{ijx}.
///
/// Coefficients are stored degree-ascending, entry j + n holds c_j. The
/// normalization is applied at evaluation, never folded into the storage.
template <typename Scalar>
class TrigPolynomial {
public:
  using Complex = std::complex<Scalar>;
  using CoeffVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  TrigPolynomial(int degree, CoeffVector coeffs) : degree_(degree), coeffs_(std::move(coeffs)) {
    if (degree_ < 1) throw ParameterError("degree must be >= 1");
    if (coeffs_.size() != 2 * static_cast<Eigen::Index>(degree_) + 1)
      throw ParameterError("coefficient vector must have length 2n+1");
  }

  int degree() const { return degree_; }
  const CoeffVector& coeffs() const { return coeffs_; }
  const Complex& coeff(int j) const { return coeffs_[j + degree_]; }
  Scalar normalization() const { return Scalar(1) / std::sqrt(Scalar(2 * degree_ + 1)); }

  bool has_real_coeffs() const { return (coeffs_.imag().array() == Scalar(0)).all(); }

private:
  int degree_;
  CoeffVector coeffs_;
};

using TrigPolynomiald = TrigPolynomial<double>;

namespace detail {

/// Neumaier-compensated complex accumulator.
template <typename Scalar>
struct CompensatedSum {
  Scalar re = 0, im = 0, cre = 0, cim = 0;

  static void add(Scalar& s, Scalar& c, Scalar v) {
    const Scalar t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  void operator+=(std::complex<Scalar> v) {
    add(re, cre, v.real());
    add(im, cim, v.imag());
  }
  std::complex<Scalar> value() const { return {re + cre, im + cim}; }
};

/// (ij)^order for order in {0,1,2}.
template <typename Scalar>
std::complex<Scalar> derivative_factor(int j, int order) {
  const Scalar sj = static_cast<Scalar>(j);
  switch (order) {
    case 0: return {1, 0};
    case 1: return {0, sj};
    default: return {-sj * sj, 0};
  }
}

} // namespace detail

/// Direct O(n) evaluation of P^{(order)}(x), order in {0,1,2}.
///
/// Two one-sided recursions in e^{+ix} and e^{-ix}; the running power is
/// re-anchored every 32 steps to keep its modulus at one.
template <typename Scalar>
std::complex<Scalar> evaluate(const TrigPolynomial<Scalar>& p, Scalar x, int order = 0) {
  using Complex = std::complex<Scalar>;
  if (order < 0 || order > 2) throw ParameterError("derivative order must be 0, 1 or 2");
  const int n = p.degree();
  const Complex w = std::polar(Scalar(1), x);
  detail::CompensatedSum<Scalar> acc;
  acc += detail::derivative_factor<Scalar>(0, order) * p.coeff(0);
  Complex pw(1, 0);
  for (int j = 1; j <= n; ++j) {
    if (j % 32 == 0)
      pw = std::polar(Scalar(1), x * static_cast<Scalar>(j));
    else
      pw *= w;
    acc += detail::derivative_factor<Scalar>(j, order) * p.coeff(j) * pw;
    acc += detail::derivative_factor<Scalar>(-j, order) * p.coeff(-j) * std::conj(pw);
  }
  return p.normalization() * acc.value();
}

/// r_n and its first two derivatives at one point.
template <typename Scalar>
struct KernelValue {
  Scalar r = 1;
  Scalar r1 = 0;
  Scalar r2 = 0;
  Scalar sigma_n = 0;
};

/// sqrt(E|P'(0)|^2) = sqrt(n(n+1)/3).
template <typename Scalar = double>
Scalar sigma_n(int n) {
  if (n < 1) throw ParameterError("degree must be >= 1");
  return std::sqrt(Scalar(n) * Scalar(n + 1) / Scalar(3));
}

/// Reduce an angle to (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar x) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar y = std::remainder(x, 2 * pi);
  if (y <= -pi) y += 2 * pi;
  return y;
}

/// |x| below which `kernel` switches to its Taylor branch.
template <typename Scalar>
Scalar kernel_series_switch(int n) {
  return Scalar(1) / (Scalar(4) * Scalar(n));
}

namespace detail {

/// Taylor coefficients a_k = (2n+1)^{-1} sum_j (j/n)^{2k} (-1)^k / (2k)!,
/// so that r_n(x) = sum_k a_k (nx)^{2k}.
template <typename Scalar>
std::vector<Scalar> kernel_taylor_coeffs(int n, int terms) {
  std::vector<Scalar> a(terms, Scalar(0));
  const Scalar inv_n = Scalar(1) / Scalar(n);
  for (int j = 1; j <= n; ++j) {
    const Scalar u2 = (Scalar(j) * inv_n) * (Scalar(j) * inv_n);
    Scalar pw = 1;
    for (int k = 1; k < terms; ++k) {
      pw *= u2;
      a[k] += 2 * pw;
    }
  }
  a[0] = Scalar(2 * n + 1);
  Scalar fact = 1;
  for (int k = 0; k < terms; ++k) {
    if (k > 0) fact *= Scalar(2 * k - 1) * Scalar(2 * k);
    a[k] = (k % 2 ? -a[k] : a[k]) / (fact * Scalar(2 * n + 1));
  }
  return a;
}

/// sinc(u) = sin(u)/u and its first two derivatives, series for |u| < 1.
template <typename Scalar>
std::array<Scalar, 3> sinc_derivs(Scalar u) {
  if (std::abs(u) < Scalar(1)) {
    constexpr int terms = 12;
    const Scalar u2 = u * u;
    Scalar s0 = 0, s1 = 0, s2 = 0;
    // coefficient of u^{2k} in sinc is (-1)^k / (2k+1)!
    std::array<Scalar, terms> c{};
    Scalar fact = 1;
    for (int k = 0; k < terms; ++k) {
      if (k > 0) fact *= Scalar(2 * k) * Scalar(2 * k + 1);
      c[k] = (k % 2 ? -1 : 1) / fact;
    }
    for (int k = terms - 1; k >= 0; --k) s0 = s0 * u2 + c[k];
    for (int k = terms - 1; k >= 1; --k) s1 = s1 * u2 + Scalar(2 * k) * c[k];
    for (int k = terms - 1; k >= 1; --k) s2 = s2 * u2 + Scalar(2 * k) * Scalar(2 * k - 1) * c[k];
    return {s0, u * s1, s2};
  }
  const Scalar s = std::sin(u), c = std::cos(u);
  return {s / u, (u * c - s) / (u * u), ((2 - u * u) * s - 2 * u * c) / (u * u * u)};
}

} // namespace detail

/// Closed forms of r_n = (2n+1)^{-1} sum_j e^{-ijx}, r_n', r_n''.
///
/// Away from zero the kernel is evaluated as sinc((n+1/2)x) / sinc(x/2),
/// which is the same quotient as sin((n+1/2)x) / ((2n+1) sin(x/2)) without
/// the cancellation the sin^3(x/2) form of r'' suffers at |x| ~ 1/n. For
/// |x| < kernel_series_switch(n) the Taylor series in nx with exact
/// (finite-n) power-sum coefficients is used instead. Its leading terms are 1 - n(n+1)x^2/6 + ..., which reduce
/// to 1 - (nx)^2/6 + (nx)^4/120 as n grows.
template <typename Scalar>
KernelValue<Scalar> kernel(int n, Scalar x) {
  const Scalar sig = sigma_n<Scalar>(n);
  const Scalar y = wrap_angle(x);
  KernelValue<Scalar> out;
  out.sigma_n = sig;

  if (std::abs(y) < kernel_series_switch<Scalar>(n)) {
    constexpr int terms = 12;
    const auto a = detail::kernel_taylor_coeffs<Scalar>(n, terms);
    const Scalar nx = Scalar(n) * y;
    const Scalar nx2 = nx * nx;
    // Horner in (nx)^2 for r, and for the derivatives through d/dx = n d/d(nx).
    Scalar r = 0, d1 = 0, d2 = 0;
    for (int k = terms - 1; k >= 0; --k) r = r * nx2 + a[k];
    for (int k = terms - 1; k >= 1; --k) d1 = d1 * nx2 + Scalar(2 * k) * a[k];
    for (int k = terms - 1; k >= 1; --k) d2 = d2 * nx2 + Scalar(2 * k) * Scalar(2 * k - 1) * a[k];
    out.r = r;
    out.r1 = Scalar(n) * nx * d1;
    out.r2 = Scalar(n) * Scalar(n) * d2;
    return out;
  }

  // r = sinc(hx) / sinc(x/2) with h = n + 1/2; quotient rule for r', r''.
  const Scalar h = Scalar(n) + Scalar(0.5);
  const auto f = detail::sinc_derivs(h * y);
  const auto g = detail::sinc_derivs(y / 2);
  const Scalar f1 = h * f[1], f2 = h * h * f[2];
  const Scalar g1 = g[1] / 2, g2 = g[2] / 4;
  const Scalar inv = Scalar(1) / g[0];
  out.r = f[0] * inv;
  out.r1 = (f1 - out.r * g1) * inv;
  out.r2 = (f2 - 2 * out.r1 * g1 - out.r * g2) * inv;
  return out;
}

} // namespace trigmin
