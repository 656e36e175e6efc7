#include "contilab/agents/lms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "contilab/core/errors.hpp"
#include "contilab/infotheory/lms_analysis.hpp"

namespace contilab {

LmsAgent::LmsAgent(double alpha, double eta, ShrinkageMode mode, double mu0)
    : alpha_(alpha), eta_(eta), mode_(mode), mu0_(mu0), mu_(mu0) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
}

void LmsAgent::reset(const std::optional<Signal>&, Rng&) { mu_ = mu0_; }

double LmsAgent::prediction() const { return mode_ == ShrinkageMode::Example3 ? eta_ * mu_ : mu_; }

Signal LmsAgent::act(Rng&) { return prediction(); }

double LmsAgent::lms_update(double y) {
  const double base = mode_ == ShrinkageMode::Example3 ? eta_ * mu_ : mu_;
  mu_ = base + alpha_ * (y - base);
  return prediction();
}

void LmsAgent::update(const Signal&, const Signal& observation, double, Rng&) { lms_update(as_real(observation)); }

CapacityLmsAgent::CapacityLmsAgent(double alpha, double delta) : alpha_(alpha), delta_(delta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
}

CapacityLmsAgent CapacityLmsAgent::with_capacity(double alpha, double eta, double sigma, double capacity) {
  return CapacityLmsAgent(alpha, std::sqrt(delta_star(alpha, eta, sigma, capacity)));
}

void CapacityLmsAgent::reset(const std::optional<Signal>&, Rng&) {
  u_ = 0.0;
  last_noise_ = 0.0;
}

Signal CapacityLmsAgent::act(Rng&) { return u_; }

double CapacityLmsAgent::capacity_lms_update(double y, Rng& rng) {
  last_noise_ = delta_ * rng.normal();
  u_ = u_ + alpha_ * (y - u_) + last_noise_;
  return u_;
}

void CapacityLmsAgent::update(const Signal&, const Signal& observation, double, Rng& rng) {
  capacity_lms_update(as_real(observation), rng);
}

IdbdAgent::IdbdAgent(const IdbdParams& params) : params_(params) {
  if (!(params.alpha0 > 0.0 && params.alpha0 <= 1.0)) throw std::invalid_argument("initial stepsize must lie in (0, 1]");
  if (!(params.zeta_meta >= 0.0)) throw std::invalid_argument("meta stepsize must be nonnegative");
  if (params.mode == IdbdMode::CapacityConstrained) {
    delta_star(params.alpha0, params.eta, params.sigma, params.capacity);  // validates env parameters
  } else if (!(params.delta >= 0.0)) {
    throw std::invalid_argument("delta must be nonnegative");
  }
  beta_ = std::log(params.alpha0);
  alpha_ = params.alpha0;
}

void IdbdAgent::reset(const std::optional<Signal>&, Rng&) {
  u_ = 0.0;
  h_ = 0.0;
  beta_ = std::log(params_.alpha0);
  alpha_ = params_.alpha0;
  steps_ = 0;
}

Signal IdbdAgent::act(Rng&) { return u_; }

double IdbdAgent::delta() const {
  if (params_.mode == IdbdMode::Standard) return params_.delta;
  return std::sqrt(delta_star(alpha_, params_.eta, params_.sigma, params_.capacity));
}

std::pair<double, double> IdbdAgent::idbd_update(double y, Rng& rng) {
  const double err = y - u_;
  double beta = beta_ + params_.zeta_meta * err * h_;
  if (params_.mode == IdbdMode::CapacityConstrained) {
    beta -= 0.5 * params_.zeta_meta * alpha_ *
            delta_star_dalpha(alpha_, params_.eta, params_.sigma, params_.capacity);
  }
  if (!std::isfinite(beta)) throw NumericError("non-finite log-stepsize", steps_);
  beta_ = std::clamp(beta, kBetaMin, kBetaMax);
  alpha_ = std::exp(beta_);

  const double noise = delta() * rng.normal();
  u_ = u_ + alpha_ * err + noise;
  h_ = alpha_ * err + std::max(0.0, 1.0 - alpha_) * h_;
  ++steps_;
  return {u_, alpha_};
}

void IdbdAgent::update(const Signal&, const Signal& observation, double, Rng& rng) {
  idbd_update(as_real(observation), rng);
}

void IdbdAgent::diagnostics(Diagnostics& out) const {
  out.emplace_back("alpha", alpha_);
  out.emplace_back("delta", delta());
}

}  // namespace contilab
