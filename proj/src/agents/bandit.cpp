#include "contilab/agents/bandit.hpp"

#include <cmath>
#include <stdexcept>

namespace contilab {

GaussianBanditAgent::GaussianBanditAgent(std::vector<BanditArm> arms, double sigma)
    : arms_(std::move(arms)), sigma_(sigma) {
  if (arms_.empty()) throw std::invalid_argument("bandit agent needs at least one arm");
  if (!(sigma > 0.0)) throw std::invalid_argument("observation noise must be positive");
  mu_.resize(arms_.size());
  sigma2_.resize(arms_.size());
  sample_.resize(arms_.size());
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    mu_[i] = arms_[i].mu0;
    sigma2_[i] = arms_[i].sigma0;
  }
}

void GaussianBanditAgent::reset(const std::optional<Signal>&, Rng&) {
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    mu_[i] = arms_[i].mu0;
    sigma2_[i] = arms_[i].sigma0;
  }
  last_greedy_ = false;
  greedy_count_ = 0;
  steps_ = 0;
}

void GaussianBanditAgent::set_posterior(std::vector<double> mu, std::vector<double> sigma2) {
  if (mu.size() != arms_.size() || sigma2.size() != arms_.size()) throw std::invalid_argument("posterior size mismatch");
  mu_ = std::move(mu);
  sigma2_ = std::move(sigma2);
}

Signal GaussianBanditAgent::act(Rng& rng) {
  const std::size_t n = arms_.size();
  for (std::size_t i = 0; i < n; ++i) sample_[i] = mu_[i] + std::sqrt(sampling_variance(i)) * rng.normal();

  double best = sample_[0];
  ties_.assign(1, 0);
  for (std::size_t i = 1; i < n; ++i) {
    if (sample_[i] > best) {
      best = sample_[i];
      ties_.assign(1, i);
    } else if (sample_[i] == best) {
      ties_.push_back(i);
    }
  }
  const std::size_t action = ties_.size() == 1 ? ties_[0] : ties_[rng.uniform_index(ties_.size())];

  double best_mu = mu_[0];
  for (std::size_t i = 1; i < n; ++i) best_mu = std::max(best_mu, mu_[i]);
  last_greedy_ = mu_[action] == best_mu;
  greedy_count_ += last_greedy_ ? 1 : 0;
  ++steps_;
  return action;
}

void GaussianBanditAgent::ts_update(std::size_t arm, double observation) {
  if (arm >= arms_.size()) throw std::invalid_argument("arm index out of range");
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    const double eta = arms_[i].eta;
    const double pred = eta * eta * sigma2_[i] + arms_[i].zeta * arms_[i].zeta;
    if (i == arm) {
      const double post = 1.0 / (1.0 / pred + 1.0 / (sigma_ * sigma_));
      const double step = post / (sigma_ * sigma_);
      mu_[i] = eta * mu_[i] + step * (observation - eta * mu_[i]);
      sigma2_[i] = post;
    } else {
      mu_[i] = eta * mu_[i];
      sigma2_[i] = pred;
    }
  }
}

void GaussianBanditAgent::update(const Signal& action, const Signal& observation, double, Rng&) {
  ts_update(as_index(action), as_real(observation));
}

double GaussianBanditAgent::greedy_rate() const {
  return steps_ == 0 ? 0.0 : static_cast<double>(greedy_count_) / static_cast<double>(steps_);
}

void GaussianBanditAgent::diagnostics(Diagnostics& out) const {
  out.emplace_back("greedy", last_greedy_ ? 1.0 : 0.0);
  out.emplace_back("greedy_rate", greedy_rate());
}

double PsAgent::compute_x_star(double eta, double zeta, double sigma) {
  const double s2 = sigma * sigma;
  const double z2 = zeta * zeta;
  const double b = z2 + s2 - eta * eta * s2;
  return 0.5 * (b + std::sqrt(b * b + 4.0 * eta * eta * z2 * s2));
}

PsAgent::PsAgent(std::vector<BanditArm> arms, double sigma) : GaussianBanditAgent(std::move(arms), sigma) {
  for (const auto& a : arms_) x_star_.push_back(compute_x_star(a.eta, a.zeta, sigma_));
}

double PsAgent::sampling_variance(std::size_t arm) const {
  const double eta2 = arms_[arm].eta * arms_[arm].eta;
  const double s = sigma2()[arm];
  const double denom = eta2 * s + x_star_[arm];
  return denom > 0.0 ? eta2 * s * s / denom : 0.0;
}

}  // namespace contilab
