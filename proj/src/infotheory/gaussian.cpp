#include "contilab/infotheory/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "contilab/core/errors.hpp"

namespace contilab {

namespace {

constexpr double kNegativeTol = 1e-10;
constexpr double kPivotRatio = 1e-11;
constexpr double kRankTol = 1e-12;

std::string format_eigenvalue(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> checked_eigen(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  const auto& ev = es.eigenvalues();
  const double top = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -kNegativeTol * top) {
    throw NumericError("covariance is indefinite: eigenvalue " + format_eigenvalue(ev.minCoeff()));
  }
  return es;
}

bool well_conditioned(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = llt.matrixLLT().diagonal().array().square();
  return d.minCoeff() > kPivotRatio * d.maxCoeff();
}

void check_index_set(const IndexSet& s, std::size_t n, const char* name) {
  for (std::size_t i : s) {
    if (i >= n) throw std::invalid_argument(std::string("index out of range in set ") + name);
  }
}

IndexSet merge(const IndexSet& a, const IndexSet& b) {
  IndexSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

GaussianJointModel::GaussianJointModel(Eigen::MatrixXd cov, std::vector<std::string> labels)
    : cov_(std::move(cov)), labels_(std::move(labels)) {
  if (cov_.rows() != cov_.cols()) throw std::invalid_argument("covariance must be square");
  if (!cov_.allFinite()) throw NumericError("covariance has non-finite entries");
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NumericError("covariance is not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose());
  if (labels_.empty()) {
    for (Eigen::Index i = 0; i < cov_.rows(); ++i) labels_.push_back("x" + std::to_string(i));
  } else if (labels_.size() != size()) {
    throw std::invalid_argument("label count does not match covariance size");
  }
}

std::size_t GaussianJointModel::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("no coordinate labelled " + label);
  return static_cast<std::size_t>(it - labels_.begin());
}

Eigen::MatrixXd GaussianJointModel::block(const IndexSet& rows, const IndexSet& cols) const {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = cov_(rows[i], cols[j]);
  }
  return out;
}

void GaussianJointModel::check_psd() const { checked_eigen(cov_); }

Eigen::MatrixXd conditional_cov(const GaussianJointModel& model, const IndexSet& a, const IndexSet& b) {
  check_index_set(a, model.size(), "A");
  check_index_set(b, model.size(), "B");
  Eigen::MatrixXd saa = model.block(a);
  if (b.empty()) return saa;
  const Eigen::MatrixXd sbb = model.block(b);
  const Eigen::MatrixXd sab = model.block(a, b);

  Eigen::LLT<Eigen::MatrixXd> llt(sbb);
  Eigen::MatrixXd out;
  if (well_conditioned(llt)) {
    out = saa - sab * llt.solve(sab.transpose());
  } else {
    const auto es = checked_eigen(sbb);
    const auto& ev = es.eigenvalues();
    const double cutoff = kRankTol * std::max(ev.maxCoeff(), std::numeric_limits<double>::min());
    Eigen::MatrixXd proj = sab * es.eigenvectors();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev(i) > cutoff) inv(i) = 1.0 / ev(i);
    }
    out = saa - proj * inv.asDiagonal() * proj.transpose();
  }
  return 0.5 * (out + out.transpose());
}

double log_det(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  }
  const auto es = checked_eigen(m);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) {
    throw NumericError("covariance is singular: eigenvalue " + format_eigenvalue(ev.minCoeff()));
  }
  return ev.array().log().sum();
}

double gaussian_cond_mi(const GaussianJointModel& model, const IndexSet& x, const IndexSet& z,
                        const IndexSet& d) {
  if (x.empty() || z.empty()) throw std::invalid_argument("X and Z must be nonempty");
  IndexSet all = merge(merge(x, z), d);
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw std::invalid_argument("index sets must be disjoint");
  }

  // Symmetric in X and Z; condition the smaller set.
  const bool x_small = x.size() <= z.size();
  const IndexSet& small = x_small ? x : z;
  const IndexSet& big = x_small ? z : x;

  const Eigen::MatrixXd given_d = conditional_cov(model, small, d);
  const Eigen::MatrixXd given_all = conditional_cov(model, small, merge(big, d));

  const auto es = checked_eigen(given_d);
  const auto& ev = es.eigenvalues();
  const double scale = model.block(small).diagonal().maxCoeff();
  const double cutoff = kRankTol * std::max(scale, std::numeric_limits<double>::min());

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) keep.push_back(i);
  }
  if (keep.empty()) return 0.0;

  Eigen::MatrixXd basis(given_d.rows(), static_cast<Eigen::Index>(keep.size()));
  double ld_d = 0.0;
  for (std::size_t j = 0; j < keep.size(); ++j) {
    basis.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
    ld_d += std::log(ev(keep[j]));
  }
  const Eigen::MatrixXd reduced = basis.transpose() * given_all * basis;
  const auto es2 = checked_eigen(reduced);
  if (es2.eigenvalues().minCoeff() <= cutoff) return std::numeric_limits<double>::infinity();
  return 0.5 * (ld_d - es2.eigenvalues().array().log().sum());
}

double chain_mi(double ixy, double izy) {
  if (!(ixy > 0.0) || !(izy > 0.0)) throw std::invalid_argument("chain_mi needs positive inputs");
  const double a = -std::expm1(-2.0 * ixy);
  const double b = -std::expm1(-2.0 * izy);
  return -0.5 * std::log1p(-a * b);
}

}  // namespace contilab
