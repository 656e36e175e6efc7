#include "contilab/mdp/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace contilab {

TabularMdp::TabularMdp(std::size_t s, std::size_t a, double discount)
    : num_states(s), num_actions(a), p(s * a * s, 0.0), r(s * a * s, 0.0), gamma(discount) {}

void TabularMdp::validate() const {
  if (num_states == 0 || num_actions == 0) throw std::invalid_argument("MDP needs states and actions");
  if (p.size() != num_states * num_actions * num_states || r.size() != p.size()) {
    throw std::invalid_argument("MDP tensor sizes do not match");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must lie in (0, 1)");
  for (std::size_t s = 0; s < num_states; ++s) {
    for (std::size_t a = 0; a < num_actions; ++a) {
      const double* row_p = row(s, a);
      double sum = 0.0;
      for (std::size_t k = 0; k < num_states; ++k) {
        if (!(row_p[k] >= 0.0)) throw std::invalid_argument("negative transition probability");
        sum += row_p[k];
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("transition row (" + std::to_string(s) + ", " + std::to_string(a) +
                                    ") sums to " + std::to_string(sum));
      }
    }
  }
}

void set_goal_reward(TabularMdp& mdp, std::size_t goal, double value) {
  if (goal >= mdp.num_states) throw std::invalid_argument("goal state out of range");
  std::fill(mdp.r.begin(), mdp.r.end(), 0.0);
  for (std::size_t s = 0; s < mdp.num_states; ++s) {
    for (std::size_t a = 0; a < mdp.num_actions; ++a) mdp.reward(s, a, goal) = value;
  }
}

namespace {

void bellman(const TabularMdp& mdp, const QTable& q, QTable& out) {
  const std::size_t ns = mdp.num_states;
  const std::size_t na = mdp.num_actions;
  std::vector<double> v(ns);
  for (std::size_t s = 0; s < ns; ++s) v[s] = *std::max_element(q.begin() + s * na, q.begin() + (s + 1) * na);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      double acc = 0.0;
      for (std::size_t k = 0; k < ns; ++k) acc += mdp.prob(s, a, k) * (mdp.reward(s, a, k) + mdp.gamma * v[k]);
      out[s * na + a] = acc;
    }
  }
}

double sup_gap(const QTable& a, const QTable& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

ValueIterationResult value_iteration(const TabularMdp& mdp, double tol, std::size_t max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  mdp.validate();
  ValueIterationResult res;
  res.q.assign(mdp.num_states * mdp.num_actions, 0.0);
  QTable next(res.q.size());
  for (std::size_t it = 0; it < max_iter; ++it) {
    bellman(mdp, res.q, next);
    const double gap = sup_gap(next, res.q);
    res.gaps.push_back(gap);
    res.q.swap(next);
    if (gap < tol) return res;
  }
  throw NumericError("value iteration did not converge");
}

double bellman_residual(const TabularMdp& mdp, const QTable& q) {
  QTable next(q.size());
  bellman(mdp, q, next);
  return sup_gap(next, q);
}

std::vector<std::size_t> greedy_policy(const TabularMdp& mdp, const QTable& q) {
  std::vector<std::size_t> pi(mdp.num_states, 0);
  for (std::size_t s = 0; s < mdp.num_states; ++s) {
    double best = q[s * mdp.num_actions];
    for (std::size_t a = 1; a < mdp.num_actions; ++a) {
      if (q[s * mdp.num_actions + a] > best) {
        best = q[s * mdp.num_actions + a];
        pi[s] = a;
      }
    }
  }
  return pi;
}

std::vector<double> greedy_stationary_distribution(const TabularMdp& mdp, const QTable& q) {
  const std::size_t n = mdp.num_states;
  const auto pi = greedy_policy(mdp, q);
  // The lazy chain (I + M) / 2 is aperiodic with the same invariant measures as
  // M, and its limit from any start equals the Cesaro limit of M from that start.
  std::vector<double> m(n * n, 0.0), sq(n * n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < n; ++k) m[s * n + k] = 0.5 * mdp.prob(s, pi[s], k);
    m[s * n + s] += 0.5;
  }
  for (int iter = 0; iter < 128; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += m[i * n + k] * m[k * n + j];
        sq[i * n + j] = acc;
        row_sum += acc;
      }
      for (std::size_t j = 0; j < n; ++j) {
        sq[i * n + j] /= row_sum;
        change = std::max(change, std::abs(sq[i * n + j] - m[i * n + j]));
      }
    }
    m.swap(sq);
    if (change < 1e-15) break;
  }
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[j] += m[i * n + j] / static_cast<double>(n);
  }
  double total = 0.0;
  for (double x : d) total += x;
  for (double& x : d) x /= total;
  return d;
}

double goal_stationary_mass(const TabularMdp& mdp, std::size_t goal) {
  if (goal >= mdp.num_states) throw std::invalid_argument("goal state out of range");
  const auto vi = value_iteration(mdp, 1e-8);
  return greedy_stationary_distribution(mdp, vi.q)[goal];
}

double scale_goal_reward(const TabularMdp& mdp, std::size_t goal) {
  const double dg = goal_stationary_mass(mdp, goal);
  if (dg < 1e-9) {
    throw DegenerateMdpError("goal state has stationary mass " + std::to_string(dg) + " under the greedy policy");
  }
  return 0.5 / dg;
}

}  // namespace contilab
