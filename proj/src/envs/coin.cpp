#include "contilab/envs/coin.hpp"

#include <stdexcept>

namespace contilab {

double CoinPrior::sample(Rng& rng) const {
  switch (kind) {
    case Beta:
      return rng.beta(a, b);
    case TwoPoint:
      return rng.bernoulli(0.5) ? b : a;
    case Fixed:
      return a;
  }
  return a;
}

double CoinPrior::mean() const {
  switch (kind) {
    case Beta:
      return a / (a + b);
    case TwoPoint:
      return 0.5 * (a + b);
    case Fixed:
      return a;
  }
  return a;
}

CoinSwapEnv::CoinSwapEnv(std::vector<CoinArm> arms) : arms_(std::move(arms)), bias_(arms_.size(), 0.0) {
  if (arms_.empty()) throw std::invalid_argument("coin environment needs at least one arm");
  for (const auto& arm : arms_) {
    if (!(arm.swap_prob >= 0.0 && arm.swap_prob <= 1.0)) throw std::invalid_argument("swap probability must lie in [0, 1]");
    if (arm.prior.kind == CoinPrior::Beta && !(arm.prior.a > 0.0 && arm.prior.b > 0.0)) {
      throw std::invalid_argument("beta prior parameters must be positive");
    }
    if (arm.prior.kind != CoinPrior::Beta && !(arm.prior.a >= 0.0 && arm.prior.b <= 1.0 && arm.prior.a <= arm.prior.b)) {
      throw std::invalid_argument("coin biases must lie in [0, 1]");
    }
  }
}

std::optional<Signal> CoinSwapEnv::reset(Rng& rng) {
  for (std::size_t i = 0; i < arms_.size(); ++i) bias_[i] = arms_[i].prior.sample(rng);
  replacements_ = 0;
  return std::nullopt;
}

std::size_t CoinSwapEnv::coin_step(std::size_t arm, Rng& rng) {
  if (arm >= arms_.size()) throw std::invalid_argument("coin index out of range");
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (rng.uniform() < arms_[i].swap_prob) {
      bias_[i] = arms_[i].prior.sample(rng);
      ++replacements_;
    }
  }
  return rng.uniform() < bias_[arm] ? 1 : 0;
}

Transition CoinSwapEnv::step(const Signal& action, Rng& rng) {
  const std::size_t outcome = coin_step(as_index(action), rng);
  return {outcome, static_cast<double>(outcome)};
}

}  // namespace contilab
