#include "contilab/agents/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace contilab {

DyadicCoinBeliefAgent::DyadicCoinBeliefAgent(double p1, double q2, std::shared_ptr<const BeliefPolicy> policy)
    : p1_(p1), q2_(q2), policy_(std::move(policy)) {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(q2 >= 0.0 && q2 <= 1.0)) {
    throw std::invalid_argument("probabilities must lie in [0, 1]");
  }
}

void DyadicCoinBeliefAgent::reset(const std::optional<Signal>&, Rng&) { b_ = 0.5; }

Signal DyadicCoinBeliefAgent::act(Rng&) {
  if (policy_) return policy_->action(b_);
  return std::size_t{b_ > p1_ ? 1u : 0u};
}

void DyadicCoinBeliefAgent::observe(std::size_t outcome) { b_ = outcome == 1 ? 1.0 : 0.0; }

void DyadicCoinBeliefAgent::advance() { b_ = std::clamp(belief_replacement(b_, q2_), 0.0, 1.0); }

double DyadicCoinBeliefAgent::coin_belief_update(bool pulled_coin2, std::optional<std::size_t> outcome) {
  if (pulled_coin2 != outcome.has_value()) throw std::invalid_argument("outcome must be given iff coin 2 was tossed");
  if (outcome) observe(*outcome);
  advance();
  return b_;
}

void DyadicCoinBeliefAgent::update(const Signal& action, const Signal& observation, double, Rng&) {
  const bool coin2 = as_index(action) == 1;
  coin_belief_update(coin2, coin2 ? std::optional<std::size_t>(as_index(observation)) : std::nullopt);
}

void DyadicCoinBeliefAgent::diagnostics(Diagnostics& out) const { out.emplace_back("belief", b_); }

LogitPredictorAgent::LogitPredictorAgent(std::size_t grid_points, double half_width) {
  if (grid_points < 3) throw std::invalid_argument("quadrature grid needs at least 3 points");
  if (!(half_width > 0.0)) throw std::invalid_argument("grid half-width must be positive");
  const double h = 2.0 * half_width / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double th = -half_width + h * static_cast<double>(i);
    const double w = (i == 0 || i + 1 == grid_points) ? 0.5 * h : h;
    theta_.push_back(th);
    log_prior_.push_back(std::log(w) - 0.5 * th * th);
    log_sig_.push_back(-std::log1p(std::exp(-th)));
    log_sig_neg_.push_back(-std::log1p(std::exp(th)));
  }
  log_lik_.assign(grid_points, 0.0);
  refresh();
}

void LogitPredictorAgent::reset(const std::optional<Signal>&, Rng&) {
  std::fill(log_lik_.begin(), log_lik_.end(), 0.0);
  refresh();
}

std::vector<double> LogitPredictorAgent::posterior_weights() const {
  std::vector<double> w(theta_.size());
  double top = -INFINITY;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = log_prior_[i] + log_lik_[i];
    top = std::max(top, w[i]);
  }
  double sum = 0.0;
  for (double& x : w) {
    x = std::exp(x - top);
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

void LogitPredictorAgent::refresh() {
  const auto w = posterior_weights();
  double p = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) p += w[i] * std::exp(log_sig_[i]);
  p_one_ = p;
}

void LogitPredictorAgent::observe(std::size_t outcome) {
  const auto& add = outcome == 1 ? log_sig_ : log_sig_neg_;
  for (std::size_t i = 0; i < log_lik_.size(); ++i) log_lik_[i] += add[i];
  refresh();
}

Signal LogitPredictorAgent::act(Rng&) { return p_one_; }

void LogitPredictorAgent::update(const Signal&, const Signal& observation, double, Rng&) {
  observe(as_index(observation));
}

BitFlipAgent::BitFlipAgent(double mean_p) : mean_p_(mean_p) {
  if (!(mean_p >= 0.0 && mean_p <= 1.0)) throw std::invalid_argument("mean flip probability must lie in [0, 1]");
}

void BitFlipAgent::reset(const std::optional<Signal>&, Rng&) {
  last_bit_ = 0;
  started_ = false;
}

std::size_t BitFlipAgent::bitflip_act(Rng& rng) const {
  if (!started_) return 1;
  const double lb = static_cast<double>(last_bit_);
  const double p_one = mean_p_ * (1.0 - lb) + (1.0 - mean_p_) * lb;
  if (p_one > 0.5) return 1;
  if (p_one < 0.5) return 0;
  return rng.uniform_index(2);
}

Signal BitFlipAgent::act(Rng& rng) { return bitflip_act(rng); }

void BitFlipAgent::update(const Signal&, const Signal& observation, double, Rng&) {
  last_bit_ = as_index(observation);
  started_ = true;
}

}  // namespace contilab
