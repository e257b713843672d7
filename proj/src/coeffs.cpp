#include "trigmin/coeffs.hpp"

#include <cmath>

#include "trigmin/errors.hpp"

namespace trigmin {

double CoefficientModel::resolved_delta(int n) const {
  if (delta > 0.0) return delta;
  return 1.0 / std::sqrt(static_cast<double>(n));
}

void CoefficientModel::validate(int n) const {
  if (n < 1) throw ParameterError("degree must be >= 1");
  if (kind != ModelKind::CramerPerturbed) return;
  const double d = resolved_delta(n);
  if (!(d > 0.0 && d < 1.0)) throw InvalidModel("CramerPerturbed requires delta in (0,1)");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ComplexGaussian: return "complex";
    case ModelKind::RealGaussian: return "real";
    case ModelKind::CramerPerturbed: return "cramer";
  }
  return "?";
}

std::string to_string(CramerBase base) {
  return base == CramerBase::Laplace ? "laplace" : "uniform";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "complex") return ModelKind::ComplexGaussian;
  if (s == "real") return ModelKind::RealGaussian;
  if (s == "cramer") return ModelKind::CramerPerturbed;
  throw InvalidModel("unknown model.kind '" + s + "'");
}

CramerBase parse_cramer_base(const std::string& s) {
  if (s == "uniform") return CramerBase::UniformSymmetric;
  if (s == "laplace") return CramerBase::Laplace;
  throw InvalidModel("unknown model.base '" + s + "'");
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

TrialStream derive_trial_stream(const RngSpec& spec) {
  return TrialStream(mix64(mix64(spec.master_seed) ^ mix64(~spec.trial_index)));
}

namespace {

double sample_base(CramerBase base, double variance, TrialStream& stream) {
  if (base == CramerBase::UniformSymmetric) {
    const double half = std::sqrt(3.0 * variance);
    return half * (2.0 * stream.uniform() - 1.0);
  }
  // Laplace(0, b) has variance 2 b^2.
  const double b = std::sqrt(0.5 * variance);
  const double u = stream.uniform() - 0.5;
  const double mag = -b * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -mag : mag;
}

} // namespace

Eigen::VectorXcd sample_coefficients(const CoefficientModel& model, int n, TrialStream& stream) {
  model.validate(n);
  const Eigen::Index len = 2 * static_cast<Eigen::Index>(n) + 1;
  Eigen::VectorXcd c(len);
  switch (model.kind) {
    case ModelKind::ComplexGaussian: {
      const double s = std::sqrt(0.5);
      for (Eigen::Index k = 0; k < len; ++k) {
        const double re = stream.normal();
        const double im = stream.normal();
        c[k] = {s * re, s * im};
      }
      break;
    }
    case ModelKind::RealGaussian:
      for (Eigen::Index k = 0; k < len; ++k) c[k] = {stream.normal(), 0.0};
      break;
    case ModelKind::CramerPerturbed: {
      const double d = model.resolved_delta(n);
      const double var_xi = 1.0 - d * d;
      for (Eigen::Index k = 0; k < len; ++k) {
        const double xi = sample_base(model.base, var_xi, stream);
        c[k] = {xi + d * stream.normal(), 0.0};
      }
      break;
    }
  }
  return c;
}

} // namespace trigmin
