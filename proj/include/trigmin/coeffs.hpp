#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

namespace trigmin {

enum class ModelKind { ComplexGaussian, RealGaussian, CramerPerturbed };

/// Law of the non-Gaussian part xi of a Cramer-perturbed coefficient.
enum class CramerBase { UniformSymmetric, Laplace };

/// Coefficient law. Every model has unit total variance per coefficient.
///
/// CramerPerturbed draws xi + delta * X with X ~ N(0,1) and xi from `base`
/// rescaled to mean 0 and variance 1 - delta^2. A non-positive `delta`
/// means "use the default n^{-1/2}" and is resolved by `resolved_delta`.
struct CoefficientModel {
  ModelKind kind = ModelKind::ComplexGaussian;
  double delta = 0.0;
  CramerBase base = CramerBase::UniformSymmetric;

  double resolved_delta(int n) const;

  /// Throws InvalidModel when the model cannot be sampled at degree n.
  void validate(int n) const;

  bool operator==(const CoefficientModel&) const = default;
};

std::string to_string(ModelKind kind);
std::string to_string(CramerBase base);
ModelKind parse_model_kind(const std::string& s);
CramerBase parse_cramer_base(const std::string& s);

struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

/// Per-trial random stream. A value type; copying forks the stream.
class TrialStream {
public:
  explicit TrialStream(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to decorrelate (seed, index) pairs.
std::uint64_t mix64(std::uint64_t x);

/// The stream for a trial is a pure function of (master_seed, trial_index),
/// so trials may run in any order on any worker.
TrialStream derive_trial_stream(const RngSpec& spec);

/// 2n+1 coefficients indexed j = -n..n (entry j + n).
Eigen::VectorXcd sample_coefficients(const CoefficientModel& model, int n, TrialStream& stream);

} // namespace trigmin
