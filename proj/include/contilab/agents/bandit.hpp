#pragma once

#include <vector>

#include "contilab/core/simulation.hpp"
#include "contilab/envs/bandit.hpp"

namespace contilab {

/// Kalman posterior N(mu_a, Sigma_a) over each arm's current mean reward, for
/// arms with AR(1) means. Subclasses choose the sampling variance.
class GaussianBanditAgent : public Agent {
 public:
  GaussianBanditAgent(std::vector<BanditArm> arms, double sigma);

  Space action_space() const override { return Space::discrete(arms_.size()); }
  Space observation_space() const override { return Space::real(); }
  void reset(const std::optional<Signal>& first, Rng& rng) override;
  Signal act(Rng& rng) override;
  void update(const Signal& action, const Signal& observation, double reward, Rng& rng) override;
  void diagnostics(Diagnostics& out) const override;

  void ts_update(std::size_t arm, double observation);
  virtual double sampling_variance(std::size_t arm) const = 0;

  const std::vector<double>& mu() const { return mu_; }
  const std::vector<double>& sigma2() const { return sigma2_; }
  void set_posterior(std::vector<double> mu, std::vector<double> sigma2);
  /// 1 if the last action maximized mu.
  bool last_greedy() const { return last_greedy_; }
  double greedy_rate() const;

 protected:
  std::vector<BanditArm> arms_;
  double sigma_;

 private:
  std::vector<double> mu_, sigma2_, sample_;
  std::vector<std::size_t> ties_;
  bool last_greedy_ = false;
  std::size_t greedy_count_ = 0, steps_ = 0;
};

/// Samples from the posterior.
class TsAgent : public GaussianBanditAgent {
 public:
  using GaussianBanditAgent::GaussianBanditAgent;
  double sampling_variance(std::size_t arm) const override { return sigma2()[arm]; }
};

/// Samples with variance eta^2 Sigma^2 / (eta^2 Sigma + x*).
class PsAgent : public GaussianBanditAgent {
 public:
  PsAgent(std::vector<BanditArm> arms, double sigma);
  double sampling_variance(std::size_t arm) const override;
  double x_star(std::size_t arm) const { return x_star_.at(arm); }

  static double compute_x_star(double eta, double zeta, double sigma);

 private:
  std::vector<double> x_star_;
};

}  // namespace contilab
