#pragma once

#include <cstdint>

#include "contilab/core/simulation.hpp"

namespace contilab {

enum class ShrinkageMode {
  /// mu <- eta mu + alpha (y - eta mu); the action is eta mu.
  Example3,
  /// mu <- mu + alpha (y - mu); the action is mu.
  AppendixB,
};

/// Scalar LMS tracker predicting a real observation.
class LmsAgent : public Agent {
 public:
  LmsAgent(double alpha, double eta, ShrinkageMode mode, double mu0 = 0.0);

  Space action_space() const override { return Space::real(); }
  Space observation_space() const override { return Space::real(); }
  void reset(const std::optional<Signal>& first, Rng& rng) override;
  Signal act(Rng& rng) override;
  void update(const Signal& action, const Signal& observation, double reward, Rng& rng) override;

  /// Returns the next prediction.
  double lms_update(double y);
  double prediction() const;
  double mu() const { return mu_; }

 private:
  double alpha_, eta_;
  ShrinkageMode mode_;
  double mu0_, mu_;
};

/// U <- U + alpha (y - U) + Q with Q ~ N(0, delta^2). Predicts U.
class CapacityLmsAgent : public Agent {
 public:
  CapacityLmsAgent(double alpha, double delta);
  /// delta^2 = delta_star(alpha, eta, sigma, capacity).
  static CapacityLmsAgent with_capacity(double alpha, double eta, double sigma, double capacity);

  Space action_space() const override { return Space::real(); }
  Space observation_space() const override { return Space::real(); }
  void reset(const std::optional<Signal>& first, Rng& rng) override;
  Signal act(Rng& rng) override;
  void update(const Signal& action, const Signal& observation, double reward, Rng& rng) override;

  double capacity_lms_update(double y, Rng& rng);
  double state() const { return u_; }
  double delta() const { return delta_; }
  /// The last quantization noise draw.
  double last_noise() const { return last_noise_; }

 private:
  double alpha_, delta_;
  double u_ = 0.0;
  double last_noise_ = 0.0;
};

enum class IdbdMode { Standard, CapacityConstrained };

struct IdbdParams {
  double zeta_meta = 0.01;
  double alpha0 = 0.1;
  IdbdMode mode = IdbdMode::CapacityConstrained;
  /// Noise std in standard mode.
  double delta = 0.0;
  /// Environment parameters for delta_star in capacity mode.
  double eta = 0.95;
  double sigma = 0.5;
  double capacity = 0.5;
};

/// LMS with the stepsize adapted by IDBD. In capacity mode the noise follows
/// delta_star(alpha) and the meta-gradient includes its derivative.
class IdbdAgent : public Agent {
 public:
  explicit IdbdAgent(const IdbdParams& params);

  Space action_space() const override { return Space::real(); }
  Space observation_space() const override { return Space::real(); }
  void reset(const std::optional<Signal>& first, Rng& rng) override;
  Signal act(Rng& rng) override;
  void update(const Signal& action, const Signal& observation, double reward, Rng& rng) override;
  void diagnostics(Diagnostics& out) const override;

  /// Returns (U, alpha) after the update.
  std::pair<double, double> idbd_update(double y, Rng& rng);

  double state() const { return u_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double trace() const { return h_; }
  double delta() const;

  static constexpr double kBetaMin = -12.0;
  static constexpr double kBetaMax = 0.0;

 private:
  IdbdParams params_;
  double u_ = 0.0, beta_ = 0.0, alpha_ = 0.0, h_ = 0.0;
  std::uint64_t steps_ = 0;
};

}  // namespace contilab
