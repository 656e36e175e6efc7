#pragma once

#include "contilab/core/simulation.hpp"

namespace contilab {

struct Ar1Params {
  double eta = 0.9;
  double zeta = 0.5;
  double sigma = 1.0;
  double mu0 = 0.0;
  /// Prior variance of theta_0.
  double sigma0 = 1.0;

  /// zeta^2 = 1 - eta^2 and a unit-variance prior, so theta_t has variance 1.
  static Ar1Params stationary(double eta, double sigma);
};

/// theta_{t+1} = eta theta_t + V, Y = theta + W. The agent predicts Y with a
/// real action and earns -(Y - A)^2.
class Ar1ScalarEnv : public Environment {
 public:
  explicit Ar1ScalarEnv(const Ar1Params& params);

  Space action_space() const override { return Space::real(); }
  Space observation_space() const override { return Space::real(); }
  std::optional<Signal> reset(Rng& rng) override;
  Transition step(const Signal& action, Rng& rng) override;

  /// Advances theta and returns the next observation.
  double ar1_step(Rng& rng);

  double theta() const { return theta_; }
  void set_theta(double theta) { theta_ = theta; }
  const Ar1Params& params() const { return params_; }

 private:
  Ar1Params params_;
  double theta_ = 0.0;
};

}  // namespace contilab
