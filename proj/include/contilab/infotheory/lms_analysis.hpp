#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "contilab/infotheory/gaussian.hpp"

namespace contilab {

/// Stationary second moments of the capacity-constrained LMS state U_t tracking
/// a unit-variance AR(1) signal observed as Y_t = theta_t + W_t. U_t includes Y_t.
class LmsSteadyCovariance {
 public:
  LmsSteadyCovariance(double eta, double sigma, double alpha, double delta);

  double eta() const { return eta_; }
  double sigma() const { return sigma_; }
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }

  /// E[Y_t Y_{t+k}].
  double yy(std::size_t k) const;
  /// E[U_t U_{t+k}].
  double uu(std::size_t k) const;
  /// E[U_{t+k} Y_t].
  double u_lead_y(std::size_t k) const;
  /// E[U_t Y_{t+k}], k >= 1.
  double u_lag_y(std::size_t k) const;

  /// E[U_a Y_b] for arbitrary time indices.
  double cov_uy(long a, long b) const;
  double cov_uu(long a, long b) const;
  double cov_yy(long a, long b) const;

 private:
  double d_ratio(std::size_t i) const;

  double eta_, sigma_, alpha_, delta_;
  double ap_;  // 1 - alpha
  double g_;   // 1 - ap * eta
  double uu0_;
};

LmsSteadyCovariance steady_cov(double eta, double sigma, double alpha, double delta);

/// A coordinate of the stationary (U, Y) process.
struct LmsCoord {
  enum Kind { U, Y } kind;
  long time;
};

GaussianJointModel stationary_joint(const LmsSteadyCovariance& cov, const std::vector<LmsCoord>& coords);

/// Returns the variance delta*^2 of quantization noise at which I(U_t; H_t) = C.
double delta_star(double alpha, double eta, double sigma, double capacity);
/// d/d(alpha) of delta_star.
double delta_star_dalpha(double alpha, double eta, double sigma, double capacity);

/// I(U_t; Y_{t-n+1:t}).
double mi_capacity(double alpha, double eta, double sigma, double delta, std::size_t n);

struct PredictiveParams {
  double slope;     // E[Y_{t+1} | U_t] = slope * U_t
  double variance;  // Var(Y_{t+1} | U_t)
};
PredictiveParams posterior_pred_params(double alpha, double eta, double sigma, double delta);

/// Stepsize at which U_t is a sufficient statistic of history for Y_{t+1}.
double optimal_alpha(double eta, double sigma);

/// Variance of Y_{t+1} given the entire infinite past of observations.
double optimal_predictive_variance(double eta, double sigma);

/// I(Y_{t+1}; H_t | U_t) in the stationary limit.
double informational_error(double alpha, double eta, double sigma, double delta);
/// I(Y_{t+1}; Y_{t-n+1:t} | U_t) from the stationary joint.
double informational_error_truncated(double alpha, double eta, double sigma, double delta, std::size_t n);

/// ceil(ln 1e-6 / ln eta), capped at 512.
std::size_t default_future_horizon(double eta);

/// I(Y_{t+1:t+K}; U_{t-1} | U_t, Y_t) with delta^2 = delta_star. K = 0 picks the default.
double forgetting_error(double alpha, double eta, double sigma, double capacity, std::size_t horizon = 0);
/// I(Y_{t+1:t+K}; Y_t | U_t) with delta^2 = delta_star. K = 0 picks the default.
double implasticity_error(double alpha, double eta, double sigma, double capacity, std::size_t horizon = 0);

/// Both terms from one evaluation, for a given noise std delta.
struct StabilityPlasticity {
  double forgetting;
  double implasticity;
  double total() const { return forgetting + implasticity; }
};
StabilityPlasticity stability_plasticity(double alpha, double eta, double sigma, double delta,
                                         std::size_t horizon = 0);

/// Lag terms (forgetting_k, implasticity_k), k = 0..t, of I(Y_{t+1}; H_t | U_t)
/// in the finite-t process started from U_0 ~ N(0,1), theta_0 ~ N(0,1).
std::vector<std::pair<double, double>> lag_decomposition(double alpha, double eta, double sigma,
                                                         double delta, std::size_t t);

/// Covariance of (U_0..U_t, Y_1..Y_{t+1}) in the finite-t process. Labels are
/// "U0".."Ut", "Y1".."Y(t+1)".
GaussianJointModel finite_lms_joint(double alpha, double eta, double sigma, double delta, std::size_t t);

double regret_bound_entropy(double entropy, std::size_t horizon);
/// (ln(1 + 2T) + 1) / (2T).
double regret_bound_logit(std::size_t horizon);

}  // namespace contilab
