#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace testing {

/// Covariance of (U_0..U_t, Y_1..Y_{t+1}) for the capacity LMS process started
/// from U_0 ~ N(0,1), theta_0 ~ N(0,1), built by growing the covariance one
/// variable at a time.
inline Eigen::MatrixXd finite_joint_by_augmentation(double alpha, double eta, double sigma, double delta,
                                                    std::size_t t) {
  // Variables in creation order; c is their covariance.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(0, 0);
  auto add = [&](const std::vector<std::pair<Eigen::Index, double>>& lin, double noise_var) {
    const Eigen::Index n = c.rows();
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(n);
    for (const auto& [i, w] : lin) coef(i) += w;
    Eigen::MatrixXd next(n + 1, n + 1);
    next.topLeftCorner(n, n) = c;
    const Eigen::VectorXd cross = c * coef;
    next.block(0, n, n, 1) = cross;
    next.block(n, 0, 1, n) = cross.transpose();
    next(n, n) = coef.dot(cross) + noise_var;
    c = next;
    return n;
  };
  const double zeta2 = 1.0 - eta * eta;
  Eigen::Index theta = add({}, 1.0);
  Eigen::Index u = add({}, 1.0);
  std::vector<Eigen::Index> us{u}, ys;
  for (std::size_t s = 1; s <= t + 1; ++s) {
    theta = add({{theta, eta}}, zeta2);
    const Eigen::Index y = add({{theta, 1.0}}, sigma * sigma);
    ys.push_back(y);
    if (s <= t) {
      u = add({{u, 1.0 - alpha}, {y, alpha}}, delta * delta);
      us.push_back(u);
    }
  }
  std::vector<Eigen::Index> order = us;
  order.insert(order.end(), ys.begin(), ys.end());
  Eigen::MatrixXd out(order.size(), order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = 0; j < order.size(); ++j) out(i, j) = c(order[i], order[j]);
  }
  return out;
}

inline double logdet_llt(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  const Eigen::MatrixXd l = llt.matrixL();
  double s = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += 2.0 * std::log(l(i, i));
  return s;
}

inline Eigen::MatrixXd sub(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  }
  return out;
}

/// I(X; Z | D) from four log-determinants. Needs a nonsingular covariance.
inline double logdet_cond_mi(const Eigen::MatrixXd& m, const std::vector<std::size_t>& x,
                             const std::vector<std::size_t>& z, const std::vector<std::size_t>& d) {
  auto cat = [](std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  return 0.5 * (logdet_llt(sub(m, cat(x, d))) + logdet_llt(sub(m, cat(z, d))) -
                logdet_llt(sub(m, cat(cat(x, z), d))) - logdet_llt(sub(m, d)));
}

/// Empirical stationary moments of the capacity LMS process on a unit-variance
/// AR(1) signal, with batch-means standard errors.
struct SimulatedMoments {
  struct Value {
    double mean, se;
  };
  Value uu0, uy0, u_next_y, u_y_next, uu1, yy1, slope, resid_var;
};

inline SimulatedMoments simulate_lms_moments(double alpha, double eta, double sigma, double delta,
                                             std::size_t steps, std::uint64_t seed, std::size_t batches = 100) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  const double drive = std::sqrt(1.0 - eta * eta);
  double theta = n01(gen);
  double y = theta + sigma * n01(gen);
  double u = y;
  for (int i = 0; i < 2000; ++i) {
    theta = eta * theta + drive * n01(gen);
    y = theta + sigma * n01(gen);
    u = u + alpha * (y - u) + delta * n01(gen);
  }
  const std::size_t len = steps / batches;
  std::vector<std::vector<double>> per(8, std::vector<double>(batches, 0.0));
  for (std::size_t b = 0; b < batches; ++b) {
    double suu = 0, suy = 0, sunext_y = 0, su_ynext = 0, suu1 = 0, syy1 = 0, syy = 0;
    for (std::size_t i = 0; i < len; ++i) {
      const double u0 = u, y0 = y;
      theta = eta * theta + drive * n01(gen);
      y = theta + sigma * n01(gen);
      u = u + alpha * (y - u) + delta * n01(gen);
      suu += u0 * u0;
      suy += u0 * y0;
      sunext_y += u * y0;
      su_ynext += u0 * y;
      suu1 += u0 * u;
      syy1 += y0 * y;
      syy += y * y;
    }
    const double n = static_cast<double>(len);
    per[0][b] = suu / n;
    per[1][b] = suy / n;
    per[2][b] = sunext_y / n;
    per[3][b] = su_ynext / n;
    per[4][b] = suu1 / n;
    per[5][b] = syy1 / n;
    per[6][b] = su_ynext / suu;
    per[7][b] = syy / n - (su_ynext / suu) * (su_ynext / n);
  }
  auto ms = [&](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    s /= static_cast<double>(v.size() - 1);
    return SimulatedMoments::Value{m, std::sqrt(s / static_cast<double>(v.size()))};
  };
  return {ms(per[0]), ms(per[1]), ms(per[2]), ms(per[3]), ms(per[4]), ms(per[5]), ms(per[6]), ms(per[7])};
}

}  // namespace testing
