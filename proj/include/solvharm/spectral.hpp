#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "solvharm/algebra.hpp"

namespace solvharm {

/// Orthonormal basis (columns, in g-coordinates) reproducing the span of
/// `span_cols`, chosen by Gram-Schmidt on the projections of e_0, e_1, ...
/// so that the result depends only on the subspace.
inline Eigen::MatrixXd canonical_basis(const Eigen::MatrixXd& span_cols, double eps = 1e-8) {
  const Eigen::Index n = span_cols.rows();
  const Eigen::Index m = span_cols.cols();
  Eigen::MatrixXd out(n, m);
  if (m == 0) return out;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(span_cols);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < n && found < m; ++i) {
    Eigen::VectorXd v = q * q.row(i).transpose();  // projection of e_i
    for (Eigen::Index k = 0; k < found; ++k) v -= out.col(k).dot(v) * out.col(k);
    for (Eigen::Index k = 0; k < found; ++k) v -= out.col(k).dot(v) * out.col(k);
    const double norm = v.norm();
    if (norm > eps) out.col(found++) = v / norm;
  }
  // ill-conditioned fallback: keep QR columns
  if (found < m) return q;
  return out;
}

struct Eigenspace {
  double alpha = 0.0;
  int multiplicity = 0;
  Eigen::MatrixXd basis;  // dim x multiplicity, orthonormal columns in g-coordinates
};

/// Eigenvalue set of D with multiplicities, ascending; lambda = max.
struct SpectralData {
  std::vector<Eigenspace> entries;
  double lambda = 0.0;

  bool same(double a, double b) const { return std::abs(a - b) <= tol::kEigenCluster * lambda; }

  const Eigenspace* find(double alpha) const {
    for (const auto& e : entries)
      if (same(e.alpha, alpha)) return &e;
    return nullptr;
  }
  int multiplicity(double alpha) const {
    const auto* e = find(alpha);
    return e ? e->multiplicity : 0;
  }
  bool contains(double alpha) const { return find(alpha) != nullptr; }
  const Eigenspace& top() const { return entries.back(); }
  int total_multiplicity() const {
    int s = 0;
    for (const auto& e : entries) s += e.multiplicity;
    return s;
  }
  Eigen::VectorXd projection(const Eigenspace& e, const Eigen::VectorXd& v) const {
    return e.basis * (e.basis.transpose() * v);
  }
};

/// Grading check [n_a, n_b] in n_{a+b}; throws GradingViolation.
inline void verify_grading(const MetricSolvableAlgebra& alg, const SpectralData& spec) {
  const double scale = std::max(1.0, alg.max_abs_constant());
  for (const auto& ea : spec.entries)
    for (const auto& eb : spec.entries) {
      const auto* target = spec.find(ea.alpha + eb.alpha);
      for (int i = 0; i < ea.multiplicity; ++i)
        for (int j = 0; j < eb.multiplicity; ++j) {
          const Eigen::VectorXd w = alg.bracket(ea.basis.col(i), eb.basis.col(j));
          const double off = target ? (w - spec.projection(*target, w)).norm() : w.norm();
          if (off > 1e-9 * scale)
            throw Error(ErrorKind::GradingViolation,
                        "[n_" + std::to_string(ea.alpha) + ", n_" + std::to_string(eb.alpha) +
                            "] leaves n_" + std::to_string(ea.alpha + eb.alpha) + " by " +
                            std::to_string(off));
        }
    }
}

/// Eigenspace decomposition of D = ad_A|n. Eigenvalues closer than 1e-9 lambda
/// merge; gaps between that and 1e-6 lambda are rejected as ambiguous.
inline SpectralData spectral_decompose(const MetricSolvableAlgebra& alg) {
  const int m = alg.dim() - 1;
  if (m < 1) throw Error(ErrorKind::DNotSymmetricPositive, "n = 0 has no spectrum");
  const Eigen::MatrixXd d = alg.derivation();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (d + d.transpose()));
  const Eigen::VectorXd vals = es.eigenvalues();
  const double lambda = vals[m - 1];
  if (!(vals[0] > 0.0)) throw Error(ErrorKind::DNotSymmetricPositive, "D has eigenvalue " + std::to_string(vals[0]));
  SpectralData out;
  out.lambda = lambda;
  int start = 0;
  for (int i = 1; i <= m; ++i) {
    if (i < m) {
      const double gap = vals[i] - vals[i - 1];
      if (gap <= tol::kEigenCluster * lambda) continue;
      if (gap < tol::kEigenSeparation * lambda)
        throw Error(ErrorKind::EigenvalueSeparation,
                    "eigenvalues " + std::to_string(vals[i - 1]) + " and " + std::to_string(vals[i]) +
                        " are neither equal nor separated");
    }
    Eigenspace e;
    e.multiplicity = i - start;
    e.alpha = vals.segment(start, e.multiplicity).mean();
    Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(alg.dim(), e.multiplicity);
    cols.bottomRows(m) = es.eigenvectors().middleCols(start, e.multiplicity);
    e.basis = canonical_basis(cols);
    out.entries.push_back(std::move(e));
    start = i;
  }
  out.lambda = out.entries.back().alpha;
  verify_grading(alg, out);
  return out;
}

}  // namespace solvharm
