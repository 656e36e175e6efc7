#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace contilab {

using IndexSet = std::vector<std::size_t>;

/// Zero-mean Gaussian over labelled coordinates.
class GaussianJointModel {
 public:
  explicit GaussianJointModel(Eigen::MatrixXd cov, std::vector<std::string> labels = {});

  std::size_t size() const { return static_cast<std::size_t>(cov_.rows()); }
  const Eigen::MatrixXd& cov() const { return cov_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Index of the coordinate with the given label. Throws std::out_of_range.
  std::size_t index_of(const std::string& label) const;

  Eigen::MatrixXd block(const IndexSet& rows, const IndexSet& cols) const;
  Eigen::MatrixXd block(const IndexSet& idx) const { return block(idx, idx); }

  /// Full eigenvalue check; throws NumericError if an eigenvalue is below -1e-10.
  void check_psd() const;

 private:
  Eigen::MatrixXd cov_;
  std::vector<std::string> labels_;
};

/// Covariance of A given B, Sigma_AA - Sigma_AB Sigma_BB^+ Sigma_BA. Singular
/// conditioning blocks are handled with a pseudo-inverse.
Eigen::MatrixXd conditional_cov(const GaussianJointModel& model, const IndexSet& a, const IndexSet& b);

/// log det of a symmetric PSD matrix. Throws NumericError (naming the
/// eigenvalue) if the matrix is indefinite beyond -1e-10 or singular.
double log_det(const Eigen::MatrixXd& m);

/// I(X; Z | D) in nats. D may be empty. Directions of X (or Z) that are
/// deterministic given D carry no information.
double gaussian_cond_mi(const GaussianJointModel& model, const IndexSet& x, const IndexSet& z,
                        const IndexSet& d = {});

/// I(X; Z) for a 3-variable Markov chain X - Y - Z from I(X;Y) and I(Z;Y).
double chain_mi(double ixy, double izy);

constexpr double kLn2 = 0.693147180559945309417;
constexpr double nats_to_bits(double nats) { return nats / kLn2; }
constexpr double bits_to_nats(double bits) { return bits * kLn2; }

}  // namespace contilab
