#include "contilab/envs/bandit.hpp"

#include <cmath>
#include <stdexcept>

namespace contilab {

GaussianAr1BanditEnv::GaussianAr1BanditEnv(std::vector<BanditArm> arms, double sigma)
    : arms_(std::move(arms)), sigma_(sigma), theta_(arms_.size(), 0.0) {
  if (arms_.empty()) throw std::invalid_argument("bandit needs at least one arm");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  for (const auto& a : arms_) {
    if (!(a.zeta >= 0.0) || !(a.sigma0 >= 0.0)) throw std::invalid_argument("arm noise scales must be nonnegative");
  }
}

GaussianAr1BanditEnv GaussianAr1BanditEnv::stationary(std::size_t num_arms, double eta, double sigma) {
  const BanditArm arm{eta, std::sqrt(std::max(0.0, 1.0 - eta * eta)), 0.0, 1.0};
  return GaussianAr1BanditEnv(std::vector<BanditArm>(num_arms, arm), sigma);
}

std::optional<Signal> GaussianAr1BanditEnv::reset(Rng& rng) {
  for (std::size_t i = 0; i < arms_.size(); ++i) theta_[i] = arms_[i].mu0 + std::sqrt(arms_[i].sigma0) * rng.normal();
  return std::nullopt;
}

double GaussianAr1BanditEnv::bandit_step(std::size_t arm, Rng& rng) {
  if (arm >= arms_.size()) throw std::invalid_argument("arm index out of range");
  // W is drawn for every arm, pulled or not.
  double reward = 0.0;
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    const double w = sigma_ * rng.normal();
    if (i == arm) reward = theta_[i] + w;
  }
  for (std::size_t i = 0; i < arms_.size(); ++i) theta_[i] = arms_[i].eta * theta_[i] + arms_[i].zeta * rng.normal();
  return reward;
}

Transition GaussianAr1BanditEnv::step(const Signal& action, Rng& rng) {
  const double r = bandit_step(as_index(action), rng);
  return {r, r};
}

}  // namespace contilab
