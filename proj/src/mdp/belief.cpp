#include "contilab/mdp/belief.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "contilab/core/errors.hpp"

namespace contilab {

double belief_replacement(double b, double q2) { return (1.0 - q2) * b + 0.5 * q2; }

BeliefPolicy::BeliefPolicy(double p1, double q2, double gamma, std::vector<double> values)
    : p1_(p1), q2_(q2), gamma_(gamma), values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("belief grid needs at least 2 points");
}

double BeliefPolicy::grid_point(std::size_t i) const {
  return static_cast<double>(i) / static_cast<double>(values_.size() - 1);
}

double BeliefPolicy::value(double b) const {
  const double x = std::clamp(b, 0.0, 1.0) * static_cast<double>(values_.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(x), values_.size() - 2);
  const double w = x - static_cast<double>(i);
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

double BeliefPolicy::q_coin1(double b) const { return p1_ + gamma_ * value(belief_replacement(b, q2_)); }

double BeliefPolicy::q_coin2(double b) const {
  return b + gamma_ * (b * value(belief_replacement(1.0, q2_)) + (1.0 - b) * value(belief_replacement(0.0, q2_)));
}

std::size_t BeliefPolicy::action(double b) const {
  const double q1 = q_coin1(b);
  const double q2 = q_coin2(b);
  return q2 > q1 + 1e-9 * std::max(1.0, std::abs(q1)) ? 1 : 0;
}

std::vector<std::size_t> BeliefPolicy::grid_actions() const {
  std::vector<std::size_t> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = action(grid_point(i));
  return out;
}

BeliefPolicy belief_value_iteration(double p1, double q2, double gamma, std::size_t grid_size, double tol) {
  if (grid_size < 2) throw std::invalid_argument("belief grid needs at least 2 points");
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(q2 >= 0.0 && q2 <= 1.0)) {
    throw std::invalid_argument("probabilities must lie in [0, 1]");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must lie in (0, 1)");

  BeliefPolicy policy(p1, q2, gamma, std::vector<double>(grid_size, 0.0));
  std::vector<double> next(grid_size);
  // Stop when the value error bound gap * gamma / (1 - gamma) drops below tol.
  const double stop = tol * (1.0 - gamma) / gamma;
  for (std::size_t it = 0; it < 10000000; ++it) {
    double gap = 0.0;
    for (std::size_t i = 0; i < grid_size; ++i) {
      const double b = policy.grid_point(i);
      next[i] = std::max(policy.q_coin1(b), policy.q_coin2(b));
      gap = std::max(gap, std::abs(next[i] - policy.values()[i]));
    }
    policy = BeliefPolicy(p1, q2, gamma, next);
    if (gap < stop) return policy;
  }
  throw NumericError("belief value iteration did not converge");
}

std::vector<double> reachable_beliefs(double q2, double b0, std::size_t max_per_orbit) {
  std::vector<double> out;
  for (double start : {b0, belief_replacement(0.0, q2), belief_replacement(1.0, q2)}) {
    double b = start;
    for (std::size_t k = 0; k < max_per_orbit; ++k) {
      out.push_back(b);
      const double nb = belief_replacement(b, q2);
      if (std::abs(nb - b) < 1e-13) break;
      b = nb;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace contilab
