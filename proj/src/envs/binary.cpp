#include "contilab/envs/binary.hpp"

#include <cmath>

namespace contilab {

std::optional<Signal> LogitEnv::reset(Rng& rng) {
  theta_ = rng.normal();
  return std::nullopt;
}

double LogitEnv::prob_one() const { return 1.0 / (1.0 + std::exp(-theta_)); }

Transition LogitEnv::step(const Signal& action, Rng& rng) {
  const double p = as_real(action);
  const std::size_t o = rng.uniform() < prob_one() ? 1 : 0;
  return {o, std::log(o == 1 ? p : 1.0 - p)};
}

BitFlipEnv::BitFlipEnv(CoinPrior flip_prior) : prior_(flip_prior) {}

std::optional<Signal> BitFlipEnv::reset(Rng& rng) {
  p_ = prior_.sample(rng);
  started_ = false;
  last_bit_ = 0;
  return std::nullopt;
}

Transition BitFlipEnv::step(const Signal& action, Rng& rng) {
  const double u = rng.uniform();
  if (!started_) {
    last_bit_ = u < 0.5 ? 1 : 0;
    started_ = true;
  } else if (u < p_) {
    last_bit_ = 1 - last_bit_;
  }
  return {last_bit_, as_index(action) == last_bit_ ? 1.0 : 0.0};
}

}  // namespace contilab
