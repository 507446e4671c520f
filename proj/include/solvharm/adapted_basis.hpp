#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "solvharm/algebra.hpp"
#include "solvharm/spectral.hpp"

namespace solvharm {

/// <J_Z U, V> = <Z, [U, V]> on all of g.
inline Eigen::MatrixXd j_operator(const MetricSolvableAlgebra& alg, const Eigen::VectorXd& z) {
  const int n = alg.dim();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += z[k] * alg.constant(u, v, k);
      j(v, u) = s;
    }
  return j;
}

struct XBlock {
  Eigen::VectorXd x;
  double lambda_j = 0.0;
};

struct YBlock {
  Eigen::VectorXd y1, y2;  // J_Z y1 = a y2, J_Z y2 = -a y1
  double a = 0.0;
};

struct VBlock {
  Eigen::VectorXd v1, v2;  // D v1 = lambda_l v1, D v2 = (lambda - lambda_l) v2, J_Z v1 = b v2
  double lambda_l = 0.0;
  double lambda_lp = 0.0;
  double b = 0.0;
};

/// Orthonormal frame of n minus Z split into blocks on which D and J_Z^2
/// act simultaneously: singletons (J_Z x = 0), pairs inside n_{lambda/2}
/// and pairs linking n_{lambda_l} with n_{lambda - lambda_l}.
struct AdaptedBasis {
  double lambda = 0.0;
  Eigen::VectorXd z;
  std::vector<XBlock> x;
  std::vector<YBlock> y;
  std::vector<VBlock> v;

  int k() const { return static_cast<int>(x.size()); }
  int p() const { return static_cast<int>(y.size()); }
  int m() const { return static_cast<int>(v.size()); }
  int size() const { return k() + 2 * p() + 2 * m(); }

  /// Columns X_1..X_k, Y_1..Y_2p, V_1..V_2m in g-coordinates.
  Eigen::MatrixXd frame() const {
    const Eigen::Index n = z.size();
    Eigen::MatrixXd f(n, size());
    int c = 0;
    for (const auto& b : x) f.col(c++) = b.x;
    for (const auto& b : y) { f.col(c++) = b.y1; f.col(c++) = b.y2; }
    for (const auto& b : v) { f.col(c++) = b.v1; f.col(c++) = b.v2; }
    return f;
  }
};

namespace detail {

inline constexpr double kJZero = 1e-16;     // J_Z^2 eigenvalue / lambda^2 treated as zero below this
inline constexpr double kJAmbiguous = 1e-8; // ... and rejected between the two
inline constexpr double kJMerge = 1e-11;    // J_Z^2 clusters merge below this relative gap

inline void classify_square(double s2, double lambda, const char* what) {
  const double rel = s2 / (lambda * lambda);
  if (rel >= kJZero && rel < kJAmbiguous)
    throw Error(ErrorKind::BlockSeparationFailure,
                std::string(what) + ": J_Z^2 eigenvalue " + std::to_string(-s2) +
                    " is too close to the kernel");
}

}  // namespace detail

inline AdaptedBasis adapted_basis(const MetricSolvableAlgebra& alg, const SpectralData& spec,
                                  const Eigen::VectorXd& z_in) {
  const double lambda = spec.lambda;
  const auto& top = spec.top();
  if (std::abs(z_in.norm() - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "Z must be a unit vector");
  const Eigen::VectorXd z = z_in / z_in.norm();
  if ((z - spec.projection(top, z)).norm() > 1e-9)
    throw Error(ErrorKind::InvalidArgument, "Z must lie in n_lambda");

  AdaptedBasis out;
  out.lambda = lambda;
  out.z = z;
  const Eigen::MatrixXd jz = j_operator(alg, z);

  auto add_kernel = [&](const Eigen::MatrixXd& cols, double alpha) {
    if (cols.cols() == 0) return;
    const Eigen::MatrixXd basis = canonical_basis(cols);
    for (Eigen::Index i = 0; i < basis.cols(); ++i) out.x.push_back({basis.col(i), alpha});
  };

  for (const auto& e : spec.entries) {
    const double alpha = e.alpha;
    if (spec.same(alpha, lambda)) {
      Eigen::MatrixXd rest = e.basis - z * (z.transpose() * e.basis);
      if (e.multiplicity > 1) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(rest, Eigen::ComputeThinU);
        add_kernel(svd.matrixU().leftCols(e.multiplicity - 1), lambda);
      }
      continue;
    }
    if (spec.same(alpha, 0.5 * lambda)) {
      const Eigen::MatrixXd jb = jz * e.basis;
      const Eigen::MatrixXd s = jb.transpose() * jb;  // -J_Z^2 on n_{lambda/2}
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
      const Eigen::VectorXd ev = es.eigenvalues();
      const Eigen::MatrixXd vecs = e.basis * es.eigenvectors();
      int first_nonzero = 0;
      for (int i = 0; i < ev.size(); ++i) {
        detail::classify_square(ev[i], lambda, "n_{lambda/2}");
        if (ev[i] / (lambda * lambda) < detail::kJZero) first_nonzero = i + 1;
      }
      add_kernel(vecs.leftCols(first_nonzero), alpha);
      int start = first_nonzero;
      for (int i = first_nonzero + 1; i <= ev.size(); ++i) {
        if (i < ev.size()) {
          const double gap = (ev[i] - ev[i - 1]) / (lambda * lambda);
          if (gap <= detail::kJMerge) continue;
          if (gap < detail::kJAmbiguous)
            throw Error(ErrorKind::BlockSeparationFailure, "J_Z^2 clusters on n_{lambda/2} too close");
        }
        const int len = i - start;
        if (len % 2 != 0)
          throw Error(ErrorKind::BlockSeparationFailure, "odd-dimensional J_Z^2 eigenspace on n_{lambda/2}");
        const double a = std::sqrt(ev.segment(start, len).mean());
        Eigen::MatrixXd remaining = canonical_basis(vecs.middleCols(start, len));
        while (remaining.cols() > 0) {
          const Eigen::VectorXd y1 = remaining.col(0);
          Eigen::VectorXd y2 = jz * y1 / a;
          y2 -= y1.dot(y2) * y1;
          y2.normalize();
          out.y.push_back({y1, y2, a});
          Eigen::MatrixXd proj = remaining - y1 * (y1.transpose() * remaining) - y2 * (y2.transpose() * remaining);
          if (remaining.cols() <= 2) break;
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(proj, Eigen::ComputeThinU);
          remaining = canonical_basis(svd.matrixU().leftCols(remaining.cols() - 2));
        }
        start = i;
      }
      continue;
    }
    if (alpha > 0.5 * lambda) {
      if (!spec.contains(lambda - alpha)) add_kernel(e.basis, alpha);
      continue;  // paired case handled from the smaller partner
    }
    const auto* partner = spec.find(lambda - alpha);
    if (!partner) {
      add_kernel(e.basis, alpha);
      continue;
    }
    const Eigen::MatrixXd mblk = partner->basis.transpose() * jz * e.basis;  // n_alpha -> n_{lambda-alpha}
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mblk, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
      detail::classify_square(sv[i] * sv[i], lambda, "mixed block");
      if (sv[i] * sv[i] / (lambda * lambda) >= detail::kJZero) rank = i + 1;
    }
    for (int s = 0; s < rank; ++s) {
      VBlock blk;
      blk.v1 = e.basis * svd.matrixV().col(s);
      blk.v2 = partner->basis * svd.matrixU().col(s);
      blk.lambda_l = alpha;
      blk.lambda_lp = partner->alpha;
      blk.b = sv[s];
      out.v.push_back(std::move(blk));
    }
    add_kernel(e.basis * svd.matrixV().rightCols(e.multiplicity - rank), alpha);
    add_kernel(partner->basis * svd.matrixU().rightCols(partner->multiplicity - rank), partner->alpha);
  }

  std::stable_sort(out.x.begin(), out.x.end(),
                   [](const XBlock& a, const XBlock& b) { return a.lambda_j < b.lambda_j; });
  std::stable_sort(out.y.begin(), out.y.end(), [](const YBlock& a, const YBlock& b) { return a.a < b.a; });
  std::stable_sort(out.v.begin(), out.v.end(), [](const VBlock& a, const VBlock& b) {
    return a.lambda_l < b.lambda_l || (a.lambda_l == b.lambda_l && a.b < b.b);
  });
  return out;
}

inline AdaptedBasis adapted_basis(const MetricSolvableAlgebra& alg, const Eigen::VectorXd& z) {
  return adapted_basis(alg, spectral_decompose(alg), z);
}

/// Default distinguished direction: first canonical basis vector of n_lambda.
inline Eigen::VectorXd default_z(const SpectralData& spec) { return spec.top().basis.col(0); }

}  // namespace solvharm
