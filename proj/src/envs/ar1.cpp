#include "contilab/envs/ar1.hpp"

#include <cmath>
#include <stdexcept>

namespace contilab {

Ar1Params Ar1Params::stationary(double eta, double sigma) {
  return {eta, std::sqrt(std::max(0.0, 1.0 - eta * eta)), sigma, 0.0, 1.0};
}

Ar1ScalarEnv::Ar1ScalarEnv(const Ar1Params& params) : params_(params) {
  if (!(params.eta >= 0.0 && params.eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (!(params.zeta >= 0.0) || !(params.sigma >= 0.0) || !(params.sigma0 >= 0.0)) {
    throw std::invalid_argument("noise scales must be nonnegative");
  }
}

std::optional<Signal> Ar1ScalarEnv::reset(Rng& rng) {
  theta_ = params_.mu0 + std::sqrt(params_.sigma0) * rng.normal();
  return std::nullopt;
}

double Ar1ScalarEnv::ar1_step(Rng& rng) {
  theta_ = params_.eta * theta_ + params_.zeta * rng.normal();
  return theta_ + params_.sigma * rng.normal();
}

Transition Ar1ScalarEnv::step(const Signal& action, Rng& rng) {
  const double y = ar1_step(rng);
  const double err = y - as_real(action);
  return {y, -err * err};
}

}  // namespace contilab
