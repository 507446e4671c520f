#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "solvharm/errors.hpp"
#include "solvharm/rational.hpp"

namespace solvharm {

namespace tol {
inline constexpr double kAlgebra = 1e-12;    // algebra identities
inline constexpr double kCurvature = 1e-10;  // curvature identities
inline constexpr double kEigenCluster = 1e-9;
inline constexpr double kEigenSeparation = 1e-6;
}  // namespace tol

/// Structure constants of g = a + n in an orthonormal basis. Index 0 is the
/// unit vector A spanning a; indices 1..n-1 span the nilradical n. The
/// metric is the identity in this basis.
class MetricSolvableAlgebra {
 public:
  MetricSolvableAlgebra() = default;

  /// Builds and validates. Throws Error on any violated invariant.
  static MetricSolvableAlgebra from_constants(int dim, std::vector<double> constants,
                                              std::optional<std::vector<Rational>> exact = {}) {
    MetricSolvableAlgebra alg = unchecked(dim, std::move(constants));
    alg.exact_ = std::move(exact);
    alg.validate();
    return alg;
  }

  /// No validation at all; used for diagnostics on deliberately broken data.
  static MetricSolvableAlgebra unchecked(int dim, std::vector<double> constants) {
    if (dim < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
    const auto n = static_cast<std::size_t>(dim);
    if (constants.size() != n * n * n)
      throw Error(ErrorKind::InvalidArgument, "structure constant array has wrong size");
    MetricSolvableAlgebra alg;
    alg.dim_ = dim;
    alg.c_ = std::move(constants);
    alg.ad_.assign(n, Eigen::MatrixXd::Zero(dim, dim));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) alg.ad_[i](k, j) = alg.constant(i, j, k);
    return alg;
  }

  int dim() const noexcept { return dim_; }

  /// [e_i, e_j] = sum_k c(i,j,k) e_k
  double constant(int i, int j, int k) const {
    return c_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }
  std::span<const double> constants() const noexcept { return c_; }
  const std::optional<std::vector<Rational>>& exact_constants() const noexcept { return exact_; }

  /// Matrix of ad_{e_i}: column j holds [e_i, e_j].
  const Eigen::MatrixXd& ad(int i) const { return ad_[i]; }

  Eigen::MatrixXd ad(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      if (x[i] != 0.0) m += x[i] * ad_[i];
    return m;
  }

  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
    for (int i = 0; i < dim_; ++i)
      if (x[i] != 0.0) out += x[i] * (ad_[i] * y);
    return out;
  }

  /// D = ad_A restricted to n, as an (n-1)x(n-1) matrix.
  Eigen::MatrixXd derivation() const {
    return ad_[0].bottomRightCorner(dim_ - 1, dim_ - 1);
  }

  bool is_abelian() const {
    return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
  }

  double max_abs_constant() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Length of the lower central series of n (0 for n = 0, 1 for abelian n).
  /// Returns -1 when n is not nilpotent.
  int nilpotency_step() const {
    const int m = dim_ - 1;
    if (m == 0) return 0;
    const double scale = std::max(1.0, max_abs_constant());
    Eigen::MatrixXd current = Eigen::MatrixXd::Zero(dim_, m);
    for (int i = 0; i < m; ++i) current(i + 1, i) = 1.0;
    for (int step = 1; step <= m + 1; ++step) {
      Eigen::MatrixXd next(dim_, m * current.cols());
      int col = 0;
      for (int i = 1; i < dim_; ++i)
        for (int c = 0; c < current.cols(); ++c) next.col(col++) = ad_[i] * current.col(c);
      if (next.cols() == 0) return step;
      // absolute threshold: a pure-rounding matrix must count as rank 0
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(next, Eigen::ComputeThinU);
      const Eigen::VectorXd sv = svd.singularValues();
      Eigen::Index rank = 0;
      while (rank < sv.size() && sv[rank] > 1e-10 * scale) ++rank;
      if (rank == 0) return step;
      if (rank >= current.cols()) return -1;
      current = svd.matrixU().leftCols(rank);
    }
    return -1;
  }

 private:
  void validate() const {
    const double scale = std::max(1.0, max_abs_constant());
    const double eps = tol::kAlgebra * scale;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k)
          if (std::abs(constant(i, j, k) + constant(j, i, k)) > eps)
            throw Error(ErrorKind::AntisymmetryViolation, "c(" + std::to_string(i) + "," +
                                                              std::to_string(j) + "," +
                                                              std::to_string(k) + ")");
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        if (std::abs(constant(i, j, 0)) > eps)
          throw Error(ErrorKind::NotNilpotentIdeal,
                      "[e_" + std::to_string(i) + ", e_" + std::to_string(j) +
                          "] has a component along A");
    const double jeps = tol::kAlgebra * scale * scale;
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        for (int k = j + 1; k < dim_; ++k) {
          // [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]
          Eigen::VectorXd s = ad_[i] * ad_[j].col(k) + ad_[j] * ad_[k].col(i) +
                              ad_[k] * ad_[i].col(j);
          if (s.cwiseAbs().maxCoeff() > jeps)
            throw Error(ErrorKind::JacobiViolation, "triple (" + std::to_string(i) + "," +
                                                        std::to_string(j) + "," +
                                                        std::to_string(k) + ")");
        }
    const int step = nilpotency_step();
    if (step < 0) throw Error(ErrorKind::NotNilpotentIdeal, "lower central series of n does not terminate");
    if (is_abelian()) return;  // flat case: D = 0 admitted
    const Eigen::MatrixXd d = derivation();
    for (int i = 0; i < d.rows(); ++i)
      for (int j = i + 1; j < d.cols(); ++j)
        if (std::abs(d(i, j) - d(j, i)) > eps)
          throw Error(ErrorKind::DNotSymmetricPositive,
                      "D not symmetric at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    if (d.rows() == 0) throw Error(ErrorKind::DNotSymmetricPositive, "n = 0 with nonzero brackets");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
    const double smallest = es.eigenvalues()[0];
    if (!(smallest > eps)) {
      Eigen::Index idx = 0;
      es.eigenvectors().col(0).cwiseAbs().maxCoeff(&idx);
      throw Error(ErrorKind::DNotSymmetricPositive,
                  "eigenvalue " + std::to_string(smallest) + " near basis index " +
                      std::to_string(idx + 1));
    }
  }

  int dim_ = 0;
  std::vector<double> c_;
  std::vector<Eigen::MatrixXd> ad_;
  std::optional<std::vector<Rational>> exact_;
};

/// Structure constants of the same algebra in the basis given by the
/// columns of the orthogonal matrix q; q must fix e_0 = A.
inline MetricSolvableAlgebra change_basis(const MetricSolvableAlgebra& alg, const Eigen::MatrixXd& q) {
  const int n = alg.dim();
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd b = alg.bracket(q.col(i), q.col(j));
      const Eigen::VectorXd coords = q.transpose() * b;
      for (int k = 0; k < n; ++k) c[(static_cast<std::size_t>(i) * n + j) * n + k] = coords[k];
    }
  // restore exact antisymmetry lost to rounding
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        auto& a = c[(static_cast<std::size_t>(i) * n + j) * n + k];
        auto& b = c[(static_cast<std::size_t>(j) * n + i) * n + k];
        const double v = 0.5 * (a - b);
        a = v;
        b = -v;
      }
  return MetricSolvableAlgebra::from_constants(n, std::move(c));
}

/// Haar-random orthogonal matrix from a seeded generator.
inline Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  return q;
}

}  // namespace solvharm
