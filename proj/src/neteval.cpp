#include "trigmin/neteval.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

namespace trigmin {

Net build_net(int n, double eps, bool round_to_pow2) {
  if (n < 1) throw ParameterError("degree must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("net exponent eps must lie in (0,1)");
  const double target = std::pow(static_cast<double>(n), 2.0 - eps);
  if (target <= 2.0 * n) throw ParameterError("net too coarse: n^(2-eps) <= 2n");

  Net net;
  net.n = n;
  net.eps = eps;
  if (round_to_pow2) {
    Eigen::Index N = 2;
    while (static_cast<double>(N) < target) N *= 2;
    net.N = N;
  } else {
    net.N = 2 * static_cast<Eigen::Index>(std::floor(target / 2.0));
  }
  if (net.N <= 2 * static_cast<Eigen::Index>(n)) throw ParameterError("net too coarse: N <= 2n");
  return net;
}

namespace detail {

namespace {
// The FFTW planner is not reentrant; execution on distinct plans is.
std::mutex planner_mutex;
} // namespace

InverseDft::InverseDft(Eigen::Index length) : length_(length) {
  std::lock_guard lock(planner_mutex);
  const auto bytes = sizeof(fftw_complex) * static_cast<std::size_t>(length);
  in_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(bytes));
  out_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(bytes));
  if (!in_ || !out_) throw std::bad_alloc();
  plan_ = fftw_plan_dft_1d(static_cast<int>(length), reinterpret_cast<fftw_complex*>(in_),
                           reinterpret_cast<fftw_complex*>(out_), FFTW_BACKWARD, FFTW_ESTIMATE);
}

InverseDft::~InverseDft() {
  std::lock_guard lock(planner_mutex);
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(in_);
  fftw_free(out_);
}

void InverseDft::execute() { fftw_execute(static_cast<fftw_plan>(plan_)); }

InverseDft& inverse_dft(Eigen::Index length) {
  thread_local std::map<Eigen::Index, std::unique_ptr<InverseDft>> cache;
  auto& slot = cache[length];
  if (!slot) slot = std::make_unique<InverseDft>(length);
  return *slot;
}

} // namespace detail

} // namespace trigmin
