#pragma once

#include <vector>

#include "contilab/core/simulation.hpp"

namespace contilab {

struct BanditArm {
  double eta = 0.9;
  double zeta = 0.0;
  double mu0 = 0.0;
  /// Prior variance of theta_{0,a}.
  double sigma0 = 1.0;
};

/// Arms with AR(1) mean rewards. Pulling arm a returns theta_{t,a} + W, after
/// which every arm's theta advances.
class GaussianAr1BanditEnv : public Environment {
 public:
  GaussianAr1BanditEnv(std::vector<BanditArm> arms, double sigma);

  /// num_arms identical arms with zeta^2 = 1 - eta^2 and a N(0, 1) prior.
  static GaussianAr1BanditEnv stationary(std::size_t num_arms, double eta, double sigma);

  Space action_space() const override { return Space::discrete(arms_.size()); }
  Space observation_space() const override { return Space::real(); }
  std::optional<Signal> reset(Rng& rng) override;
  Transition step(const Signal& action, Rng& rng) override;

  double bandit_step(std::size_t arm, Rng& rng);

  std::size_t num_arms() const { return arms_.size(); }
  double theta(std::size_t arm) const { return theta_.at(arm); }
  const std::vector<double>& thetas() const { return theta_; }
  const std::vector<BanditArm>& arms() const { return arms_; }
  double sigma() const { return sigma_; }

 private:
  std::vector<BanditArm> arms_;
  double sigma_;
  std::vector<double> theta_;
};

}  // namespace contilab
