#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "trigmin/errors.hpp"
#include "trigmin/poly.hpp"

namespace trigmin {

/// Equispaced net x_alpha = 2 pi alpha / N, alpha in {-N/2, ..., N/2 - 1}.
///
/// Net vectors are stored by position pos = alpha + N/2, so position 0 is
/// alpha = -N/2 (x = -pi) and position N/2 is x = 0.
struct Net {
  int n = 0;
  double eps = 0.0;
  Eigen::Index N = 0;

  double half_width() const { return std::numbers::pi / static_cast<double>(N); }
  double spacing() const { return 2.0 * std::numbers::pi / static_cast<double>(N); }
  Eigen::Index alpha_of(Eigen::Index pos) const { return pos - N / 2; }
  Eigen::Index pos_of(Eigen::Index alpha) const { return alpha + N / 2; }
  double x_alpha(Eigen::Index alpha) const { return spacing() * static_cast<double>(alpha); }
  double x_at(Eigen::Index pos) const { return x_alpha(alpha_of(pos)); }
};

/// Net for degree n with density exponent eps.
///
/// round_to_pow2 picks the smallest power of two >= n^{2-eps}; otherwise
/// N = 2 floor(n^{2-eps} / 2). Throws ParameterError if the net is too
/// coarse to separate the 2n+1 frequencies.
Net build_net(int n, double eps, bool round_to_pow2 = true);

namespace detail {

/// Unscaled backward DFT of one fixed length on FFTW-owned aligned buffers.
class InverseDft {
public:
  explicit InverseDft(Eigen::Index length);
  ~InverseDft();
  InverseDft(const InverseDft&) = delete;
  InverseDft& operator=(const InverseDft&) = delete;

  Eigen::Index length() const { return length_; }
  std::complex<double>* input() { return in_; }
  const std::complex<double>* output() const { return out_; }
  void execute();

private:
  Eigen::Index length_;
  std::complex<double>* in_;
  std::complex<double>* out_;
  void* plan_;
};

/// Per-thread cache of transforms keyed by length.
InverseDft& inverse_dft(Eigen::Index length);

inline void check_grid(int n, Eigen::Index M, int order) {
  if (M <= 2 * static_cast<Eigen::Index>(n))
    throw ParameterError("transform length must exceed 2n (frequency slots collide)");
  if (order < 0 || order > 2) throw ParameterError("derivative order must be 0, 1 or 2");
}

} // namespace detail

/// Values of P^{(order)} at x_k = 2 pi k / M, k = 0..M-1, via one unscaled
/// inverse DFT of length M. Requires M > 2n.
///
/// Coefficient j goes to frequency slot (j + M) mod M. Double precision uses
/// FFTW; other scalars go through Eigen's FFT.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> evaluate_on_grid(const TrigPolynomial<Scalar>& p,
                                                                        Eigen::Index M, int order) {
  using Complex = std::complex<Scalar>;
  const int n = p.degree();
  detail::check_grid(n, M, order);
  const Scalar norm = p.normalization();

  if constexpr (std::is_same_v<Scalar, double>) {
    auto& dft = detail::inverse_dft(M);
    Complex* spectrum = dft.input();
    std::fill(spectrum, spectrum + M, Complex(0));
    for (int j = -n; j <= n; ++j)
      spectrum[(j + M) % M] = norm * detail::derivative_factor<Scalar>(j, order) * p.coeff(j);
    dft.execute();
    return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 1>>(dft.output(), M);
  } else {
    std::vector<Complex> spectrum(static_cast<std::size_t>(M), Complex(0));
    for (int j = -n; j <= n; ++j)
      spectrum[static_cast<std::size_t>((j + M) % M)] = norm * detail::derivative_factor<Scalar>(j, order) * p.coeff(j);
    thread_local Eigen::FFT<Scalar> fft;
    fft.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    std::vector<Complex> values;
    fft.inv(values, spectrum);
    return Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, 1>>(values.data(), M);
  }
}

/// P^{(order)}(x_alpha) for every net point, indexed by position.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> evaluate_on_net(const TrigPolynomial<Scalar>& p,
                                                                       const Net& net, int order) {
  const auto raw = evaluate_on_grid(p, net.N, order);
  const Eigen::Index N = net.N;
  const Eigen::Index half = N / 2;
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> out(N);
  // alpha < 0 lives at transform index alpha + N.
  out.head(half) = raw.tail(half);
  out.tail(N - half) = raw.head(N - half);
  return out;
}

} // namespace trigmin
