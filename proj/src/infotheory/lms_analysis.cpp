#include "contilab/infotheory/lms_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace contilab {

namespace {

void check_params(double eta, double sigma, double alpha, double delta) {
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in [0, 1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
}

double capacity_factor(double capacity) {
  if (!(capacity > 0.0)) throw std::invalid_argument("capacity must be positive");
  // e^{-2C} / (1 - e^{-2C})
  return 1.0 / std::expm1(2.0 * capacity);
}

IndexSet range(std::size_t from, std::size_t to) {
  IndexSet out;
  for (std::size_t i = from; i < to; ++i) out.push_back(i);
  return out;
}

}  // namespace

LmsSteadyCovariance::LmsSteadyCovariance(double eta, double sigma, double alpha, double delta)
    : eta_(eta), sigma_(sigma), alpha_(alpha), delta_(delta) {
  check_params(eta, sigma, alpha, delta);
  ap_ = 1.0 - alpha;
  g_ = 1.0 - ap_ * eta;
  const double s2 = sigma * sigma;
  uu0_ = alpha * (s2 * g_ + 1.0 + ap_ * eta) / (g_ * (1.0 + ap_)) + delta * delta / (1.0 - ap_ * ap_);
}

double LmsSteadyCovariance::d_ratio(std::size_t i) const {
  if (i == 0) return 0.0;
  const double n = static_cast<double>(i);
  if (std::abs(eta_ - ap_) < 1e-9) return n * std::pow(eta_, n - 1.0);
  return (std::pow(eta_, n) - std::pow(ap_, n)) / (eta_ - ap_);
}

double LmsSteadyCovariance::yy(std::size_t k) const {
  if (k == 0) return 1.0 + sigma_ * sigma_;
  return std::pow(eta_, static_cast<double>(k));
}

double LmsSteadyCovariance::uu(std::size_t k) const {
  const double kd = static_cast<double>(k);
  return std::pow(ap_, kd) * uu0_ + alpha_ * alpha_ * eta_ * d_ratio(k) / g_;
}

double LmsSteadyCovariance::u_lead_y(std::size_t k) const {
  const double kd = static_cast<double>(k);
  const double apk = std::pow(ap_, kd);
  return alpha_ * sigma_ * sigma_ * apk + alpha_ * (d_ratio(k + 1) + apk * ap_ * eta_ / g_);
}

double LmsSteadyCovariance::u_lag_y(std::size_t k) const {
  if (k == 0) return u_lead_y(0);
  return alpha_ * std::pow(eta_, static_cast<double>(k)) / g_;
}

double LmsSteadyCovariance::cov_uy(long a, long b) const {
  if (a >= b) return u_lead_y(static_cast<std::size_t>(a - b));
  return u_lag_y(static_cast<std::size_t>(b - a));
}

double LmsSteadyCovariance::cov_uu(long a, long b) const {
  return uu(static_cast<std::size_t>(std::labs(a - b)));
}

double LmsSteadyCovariance::cov_yy(long a, long b) const {
  return yy(static_cast<std::size_t>(std::labs(a - b)));
}

LmsSteadyCovariance steady_cov(double eta, double sigma, double alpha, double delta) {
  return LmsSteadyCovariance(eta, sigma, alpha, delta);
}

GaussianJointModel stationary_joint(const LmsSteadyCovariance& cov, const std::vector<LmsCoord>& coords) {
  const auto n = static_cast<Eigen::Index>(coords.size());
  Eigen::MatrixXd m(n, n);
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < n; ++i) {
    const LmsCoord& a = coords[i];
    labels.push_back((a.kind == LmsCoord::U ? "U[" : "Y[") + std::to_string(a.time) + "]");
    for (Eigen::Index j = 0; j <= i; ++j) {
      const LmsCoord& b = coords[j];
      double v = 0.0;
      if (a.kind == LmsCoord::U && b.kind == LmsCoord::U) {
        v = cov.cov_uu(a.time, b.time);
      } else if (a.kind == LmsCoord::Y && b.kind == LmsCoord::Y) {
        v = cov.cov_yy(a.time, b.time);
      } else if (a.kind == LmsCoord::U) {
        v = cov.cov_uy(a.time, b.time);
      } else {
        v = cov.cov_uy(b.time, a.time);
      }
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return GaussianJointModel(std::move(m), std::move(labels));
}

double delta_star(double alpha, double eta, double sigma, double capacity) {
  check_params(eta, sigma, alpha, 0.0);
  const double kappa = capacity_factor(capacity);
  const double g = 1.0 - (1.0 - alpha) * eta;
  return kappa * alpha * alpha * (sigma * sigma - 1.0 + 2.0 / g);
}

double delta_star_dalpha(double alpha, double eta, double sigma, double capacity) {
  check_params(eta, sigma, alpha, 0.0);
  const double kappa = capacity_factor(capacity);
  const double g = 1.0 - (1.0 - alpha) * eta;
  return kappa * (2.0 * alpha * (sigma * sigma - 1.0 + 2.0 / g) - 2.0 * alpha * alpha * eta / (g * g));
}

double mi_capacity(double alpha, double eta, double sigma, double delta, std::size_t n) {
  if (n == 0) throw std::invalid_argument("mi_capacity needs n >= 1");
  const auto cov = steady_cov(eta, sigma, alpha, delta);
  std::vector<LmsCoord> coords{{LmsCoord::U, 0}};
  for (std::size_t i = 0; i < n; ++i) coords.push_back({LmsCoord::Y, -static_cast<long>(i)});
  const auto joint = stationary_joint(cov, coords);
  return gaussian_cond_mi(joint, {0}, range(1, n + 1));
}

PredictiveParams posterior_pred_params(double alpha, double eta, double sigma, double delta) {
  check_params(eta, sigma, alpha, delta);
  const double ap = 1.0 - alpha;
  const double g = 1.0 - ap * eta;
  const double s2 = sigma * sigma;
  const double d2 = delta * delta;
  const double a2 = alpha * alpha;
  const double slope = alpha * eta * (1.0 - ap * ap) / (a2 * s2 * g + a2 * (1.0 + ap * eta) + d2 * g);
  const double variance =
      1.0 + s2 - a2 * eta * eta * (1.0 - ap * ap) / (a2 * s2 * g * g + a2 * (1.0 - ap * ap * eta * eta) + d2 * g * g);
  return {slope, variance};
}

double optimal_alpha(double eta, double sigma) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("optimal_alpha needs eta in (0, 1)");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  if (sigma == 0.0) return 1.0;
  const double s2 = sigma * sigma;
  const double r = eta + 1.0 / eta + 1.0 / (s2 * eta) - eta / s2;
  // Smaller root of a'^2 - r a' + 1 = 0, written to avoid cancellation.
  const double ap = 2.0 / (r + std::sqrt(r * r - 4.0));
  return 1.0 - ap;
}

double optimal_predictive_variance(double eta, double sigma) {
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in [0, 1)");
  const double q = 1.0 - eta * eta;
  const double s2 = sigma * sigma;
  const double b = s2 * q - q;
  const double prior = 0.5 * (-b + std::sqrt(b * b + 4.0 * q * s2));
  return prior + s2;
}

double informational_error(double alpha, double eta, double sigma, double delta) {
  const auto p = posterior_pred_params(alpha, eta, sigma, delta);
  return 0.5 * std::log(p.variance / optimal_predictive_variance(eta, sigma));
}

double informational_error_truncated(double alpha, double eta, double sigma, double delta, std::size_t n) {
  if (n == 0) throw std::invalid_argument("history length must be positive");
  const auto cov = steady_cov(eta, sigma, alpha, delta);
  std::vector<LmsCoord> coords{{LmsCoord::U, 0}, {LmsCoord::Y, 1}};
  for (std::size_t i = 0; i < n; ++i) coords.push_back({LmsCoord::Y, -static_cast<long>(i)});
  const auto joint = stationary_joint(cov, coords);
  return gaussian_cond_mi(joint, {1}, range(2, n + 2), {0});
}

std::size_t default_future_horizon(double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in [0, 1)");
  if (eta == 0.0) return 1;
  const double k = std::ceil(std::log(1e-6) / std::log(eta));
  return static_cast<std::size_t>(std::clamp(k, 1.0, 512.0));
}

StabilityPlasticity stability_plasticity(double alpha, double eta, double sigma, double delta,
                                         std::size_t horizon) {
  const std::size_t k = horizon == 0 ? default_future_horizon(eta) : horizon;
  const auto cov = steady_cov(eta, sigma, alpha, delta);
  // 0: U_{t-1}, 1: U_t, 2: Y_t, 3..: Y_{t+1..t+K}
  std::vector<LmsCoord> coords{{LmsCoord::U, -1}, {LmsCoord::U, 0}, {LmsCoord::Y, 0}};
  for (std::size_t i = 1; i <= k; ++i) coords.push_back({LmsCoord::Y, static_cast<long>(i)});
  const auto joint = stationary_joint(cov, coords);
  const IndexSet future = range(3, k + 3);
  return {gaussian_cond_mi(joint, {0}, future, {1, 2}), gaussian_cond_mi(joint, {2}, future, {1})};
}

double forgetting_error(double alpha, double eta, double sigma, double capacity, std::size_t horizon) {
  const double delta = std::sqrt(delta_star(alpha, eta, sigma, capacity));
  const std::size_t k = horizon == 0 ? default_future_horizon(eta) : horizon;
  const auto cov = steady_cov(eta, sigma, alpha, delta);
  std::vector<LmsCoord> coords{{LmsCoord::U, -1}, {LmsCoord::U, 0}, {LmsCoord::Y, 0}};
  for (std::size_t i = 1; i <= k; ++i) coords.push_back({LmsCoord::Y, static_cast<long>(i)});
  return gaussian_cond_mi(stationary_joint(cov, coords), {0}, range(3, k + 3), {1, 2});
}

double implasticity_error(double alpha, double eta, double sigma, double capacity, std::size_t horizon) {
  const double delta = std::sqrt(delta_star(alpha, eta, sigma, capacity));
  const std::size_t k = horizon == 0 ? default_future_horizon(eta) : horizon;
  const auto cov = steady_cov(eta, sigma, alpha, delta);
  std::vector<LmsCoord> coords{{LmsCoord::U, 0}, {LmsCoord::Y, 0}};
  for (std::size_t i = 1; i <= k; ++i) coords.push_back({LmsCoord::Y, static_cast<long>(i)});
  return gaussian_cond_mi(stationary_joint(cov, coords), {1}, range(2, k + 2), {0});
}

GaussianJointModel finite_lms_joint(double alpha, double eta, double sigma, double delta, std::size_t t) {
  check_params(eta, sigma, alpha, delta);
  const double ap = 1.0 - alpha;
  const double drive = std::sqrt(1.0 - eta * eta);
  const auto base = static_cast<Eigen::Index>(2 + 3 * (t + 1));
  const auto rows = static_cast<Eigen::Index>(2 * (t + 1));

  // Row i of L expresses coordinate i in independent standard normals
  // (theta_0, U_0, then V_s, W_s, Q_s for s = 1..t+1).
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(rows, base);
  Eigen::RowVectorXd theta = Eigen::RowVectorXd::Zero(base);
  Eigen::RowVectorXd u = Eigen::RowVectorXd::Zero(base);
  theta(0) = 1.0;
  u(1) = 1.0;
  l.row(0) = u;
  std::vector<std::string> labels{"U0"};
  for (std::size_t s = 1; s <= t; ++s) labels.push_back("U" + std::to_string(s));
  for (std::size_t s = 1; s <= t + 1; ++s) labels.push_back("Y" + std::to_string(s));

  for (std::size_t s = 1; s <= t + 1; ++s) {
    const auto off = static_cast<Eigen::Index>(2 + 3 * (s - 1));
    theta *= eta;
    theta(off) += drive;
    Eigen::RowVectorXd y = theta;
    y(off + 1) += sigma;
    l.row(static_cast<Eigen::Index>(t + s)) = y;
    if (s <= t) {
      u = ap * u + alpha * y;
      u(off + 2) += delta;
      l.row(static_cast<Eigen::Index>(s)) = u;
    }
  }
  return GaussianJointModel(l * l.transpose(), std::move(labels));
}

std::vector<std::pair<double, double>> lag_decomposition(double alpha, double eta, double sigma,
                                                         double delta, std::size_t t) {
  const auto joint = finite_lms_joint(alpha, eta, sigma, delta, t);
  auto u_idx = [](std::size_t s) { return s; };
  auto y_idx = [t](std::size_t s) { return t + s; };  // s >= 1
  const IndexSet target{y_idx(t + 1)};

  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < t; ++k) {
    const std::size_t j = t - k;
    IndexSet later;  // Y_{j+1..t}
    for (std::size_t s = j + 1; s <= t; ++s) later.push_back(y_idx(s));

    IndexSet d_forget{u_idx(j), y_idx(j)};
    d_forget.insert(d_forget.end(), later.begin(), later.end());
    const double forgetting = gaussian_cond_mi(joint, target, {u_idx(j - 1)}, d_forget);

    IndexSet d_impl{u_idx(j)};
    d_impl.insert(d_impl.end(), later.begin(), later.end());
    const double implasticity = gaussian_cond_mi(joint, target, {y_idx(j)}, d_impl);
    out.emplace_back(forgetting, implasticity);
  }
  out.emplace_back(0.0, 0.0);
  return out;
}

double regret_bound_entropy(double entropy, std::size_t horizon) {
  if (!(entropy >= 0.0)) throw std::invalid_argument("entropy must be nonnegative");
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  return entropy / static_cast<double>(horizon);
}

double regret_bound_logit(std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  const double t = static_cast<double>(horizon);
  return (std::log1p(2.0 * t) + 1.0) / (2.0 * t);
}

}  // namespace contilab
