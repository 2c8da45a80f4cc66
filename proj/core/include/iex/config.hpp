#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iex/verification.hpp"

namespace iex {

struct LossSpec {
  bool named = true;
  std::string name = "harmonic";      // named family
  double p = 2.0;                     // lp-norm parameter
  std::vector<double> weights;        // weighted-sum parameter
  std::string expr;                   // expression text when !named
};

struct ModelSpec {
  enum class Kind { Pareto, GaussianCopula, LimitLaw, Breiman, Uniform01 };
  Kind kind = Kind::Pareto;
  std::vector<double> alphas;  // Pareto / LimitLaw
  double rho = 0.0;            // GaussianCopula
  double breiman_alpha = 1.0;  // Breiman radial exponent
  BreimanFactor factor;        // Breiman multiplicative factor
};

struct FunctionalSpec {
  enum class Kind { One, IndicatorLossAbove, CappedLoss, CappedPower, IndicatorBox };
  Kind kind = Kind::One;
  double t = 1.0;              // loss threshold
  double cap = 10.0;
  double power = 1.0;
  std::vector<double> upper;   // box corner
};

struct ExperimentConfig {
  int dimension = 2;
  LossSpec loss;
  ModelSpec model;
  std::size_t block_size = 1;
  std::size_t replicates = 1;
  std::size_t top_m = 1;
  std::size_t mc_size = 100000;
  std::uint64_t seed = 0;
  bool seed_in_config = false;
  NormalizingSequence::Mode normalization = NormalizingSequence::Mode::Theoretical;
  int workers = 1;
  FunctionalSpec functional;
};

/// Parses the JSON config document; throws ConfigError on any schema or
/// value problem.
ExperimentConfig parse_config(const std::string& json_text);

/// Deterministic canonical serialization; excludes execution-only knobs
/// (workers) so reruns hash identically regardless of parallelism.
std::string canonical_config_json(const ExperimentConfig& cfg);

/// FNV-1a 64-bit hex digest of the canonical form.
std::string config_hash(const ExperimentConfig& cfg);

LossFunction build_loss(const ExperimentConfig& cfg);
PointSampler build_model(const ExperimentConfig& cfg);

/// The implicit max-stable law of the configured model and loss.  With
/// `standard` the spectral base is normalized to total mass 1 (the
/// standard-law convention used for tilting); otherwise the true spectral
/// mass of the model is kept.
std::shared_ptr<const ImplicitMaxStableLaw> build_limit_law(const ExperimentConfig& cfg,
                                                            bool standard = false);

/// Tail index of f(X) implied by the model: sum alpha_i for Pareto,
/// 2/(1+rho) for the Gaussian copula, the radial exponent for Breiman.
double model_tail_alpha(const ExperimentConfig& cfg);

std::function<double(const Point&)> build_functional(const FunctionalSpec& spec,
                                                     const LossFunction& f);

}  // namespace iex
