#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "solvharm/algebra.hpp"

namespace solvharm {

/// G(i,j,k) = <nabla_{e_i} e_j, e_k> for left-invariant fields.
class ConnectionTable {
 public:
  explicit ConnectionTable(const MetricSolvableAlgebra& alg) : n_(alg.dim()), g_(cube(n_)) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          at(i, j, k) = 0.5 * (alg.constant(i, j, k) - alg.constant(j, k, i) + alg.constant(k, i, j));
  }

  int dim() const noexcept { return n_; }
  double operator()(int i, int j, int k) const { return g_[index(i, j, k)]; }

  /// Matrix of W -> nabla_{e_i} W.
  Eigen::MatrixXd nabla(int i) const {
    Eigen::MatrixXd m(n_, n_);
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) m(k, j) = (*this)(i, j, k);
    return m;
  }

  /// max |G(i,j,k) + G(i,k,j)|
  double compatibility_residual() const {
    double r = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) r = std::max(r, std::abs((*this)(i, j, k) + (*this)(i, k, j)));
    return r;
  }

  /// max |G(i,j,k) - G(j,i,k) - c(i,j,k)|
  double torsion_residual(const MetricSolvableAlgebra& alg) const {
    double r = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          r = std::max(r, std::abs((*this)(i, j, k) - (*this)(j, i, k) - alg.constant(i, j, k)));
    return r;
  }

 private:
  static std::size_t cube(int n) { return static_cast<std::size_t>(n) * n * n; }
  std::size_t index(int i, int j, int k) const { return (static_cast<std::size_t>(i) * n_ + j) * n_ + k; }
  double& at(int i, int j, int k) { return g_[index(i, j, k)]; }

  int n_;
  std::vector<double> g_;
};

inline ConnectionTable connection(const MetricSolvableAlgebra& alg) { return ConnectionTable(alg); }

/// Full curvature tensor plus the quadratic-form formula for sectional
/// numerators. Immutable after construction.
class CurvatureOracle {
 public:
  explicit CurvatureOracle(const MetricSolvableAlgebra& alg) : alg_(alg), n_(alg.dim()) {
    const ConnectionTable conn(alg);
    std::vector<Eigen::MatrixXd> nab;
    for (int i = 0; i < n_; ++i) nab.push_back(conn.nabla(i));
    r4_.assign(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        // R(e_a, e_b) = [nabla_a, nabla_b] - nabla_{[e_a, e_b]}
        Eigen::MatrixXd r = nab[a] * nab[b] - nab[b] * nab[a];
        for (int k = 0; k < n_; ++k) {
          const double ck = alg.constant(a, b, k);
          if (ck != 0.0) r -= ck * nab[k];
        }
        for (int c = 0; c < n_; ++c)
          for (int d = 0; d < n_; ++d) r4_[idx(a, b, c, d)] = r(d, c);
      }
    ricci_ = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        double s = 0.0;
        for (int a = 0; a < n_; ++a) s += r4(a, i, j, a);
        ricci_(i, j) = s;
      }
    const Eigen::MatrixXd ra = jacobi_operator(Eigen::VectorXd::Unit(n_, 0));
    einstein_c_ = ra.trace();
    ledger_h_ = (ra * ra).trace();
  }

  int dim() const noexcept { return n_; }
  const MetricSolvableAlgebra& algebra() const noexcept { return alg_; }

  /// <R(e_a, e_b) e_c, e_d>
  double r4(int a, int b, int c, int d) const { return r4_[idx(a, b, c, d)]; }

  /// R(X, Y, Y, X) from the quadratic formula in U and brackets.
  double sectional_numerator(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    const Eigen::VectorXd uxy = u_form(x, y);
    const Eigen::VectorXd uxx = u_form(x, x);
    const Eigen::VectorXd uyy = u_form(y, y);
    const Eigen::VectorXd xy = alg_.bracket(x, y);
    const Eigen::VectorXd yx = -xy;
    return uxy.squaredNorm() - uxx.dot(uyy) - 0.75 * xy.squaredNorm() - 0.5 * alg_.bracket(x, xy).dot(y) -
           0.5 * alg_.bracket(y, yx).dot(x);
  }

  /// R(X, Y, Y, X) by contracting the full tensor.
  double tensor_numerator(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    double s = 0.0;
    for (int a = 0; a < n_; ++a) {
      if (x[a] == 0.0) continue;
      for (int b = 0; b < n_; ++b) {
        if (y[b] == 0.0) continue;
        for (int c = 0; c < n_; ++c) {
          if (y[c] == 0.0) continue;
          for (int d = 0; d < n_; ++d) s += x[a] * y[b] * y[c] * x[d] * r4(a, b, c, d);
        }
      }
    }
    return s;
  }

  /// Sectional curvature of span(X, Y); zero for degenerate planes.
  double sectional(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    const double gram = x.squaredNorm() * y.squaredNorm() - std::pow(x.dot(y), 2);
    if (gram <= 1e-300) return 0.0;
    return sectional_numerator(x, y) / gram;
  }

  /// R_X Y = R(Y, X) X as a symmetric matrix.
  Eigen::MatrixXd jacobi_operator(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i) {
      if (x[i] == 0.0) continue;
      for (int j = 0; j < n_; ++j) {
        if (x[j] == 0.0) continue;
        const double w = x[i] * x[j];
        for (int b = 0; b < n_; ++b)
          for (int d = 0; d < n_; ++d) m(d, b) += w * r4(b, i, j, d);
      }
    }
    return m;
  }

  const Eigen::MatrixXd& ricci() const noexcept { return ricci_; }
  /// Tr R_A
  double einstein_constant() const noexcept { return einstein_c_; }
  /// Tr R_A^2
  double ledger_constant() const noexcept { return ledger_h_; }

 private:
  std::size_t idx(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }

  // <U(X,Y), e_k> = 1/2 (<X, [e_k, Y]> + <Y, [e_k, X]>)
  Eigen::VectorXd u_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    Eigen::VectorXd u(n_);
    for (int k = 0; k < n_; ++k) u[k] = 0.5 * (x.dot(alg_.ad(k) * y) + y.dot(alg_.ad(k) * x));
    return u;
  }

  MetricSolvableAlgebra alg_;
  int n_;
  std::vector<double> r4_;
  Eigen::MatrixXd ricci_;
  double einstein_c_ = 0.0;
  double ledger_h_ = 0.0;
};

struct LedgerResult {
  double c = 0.0;                   // Tr R_A
  double h = 0.0;                   // Tr R_A^2
  double einstein_residual = 0.0;   // over the sample set
  double ledger2_residual = 0.0;    // over the sample set
  double einstein_tensor_residual = 0.0;  // max |Ric - C g|
  double ledger2_tensor_residual = 0.0;   // symmetrized quartic form versus H |X|^4
};

/// Unit sample for the trace identities: every basis vector and
/// (e_0 +- e_i)/sqrt 2 for i >= 1.
inline std::vector<Eigen::VectorXd> ledger_sample(int n) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < n; ++i) out.push_back(Eigen::VectorXd::Unit(n, i));
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 1; i < n; ++i) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n), m = Eigen::VectorXd::Zero(n);
    p[0] = s; p[i] = s;
    m[0] = s; m[i] = -s;
    out.push_back(p);
    out.push_back(m);
  }
  return out;
}

inline LedgerResult ledger_check(const CurvatureOracle& curv) {
  const int n = curv.dim();
  LedgerResult res;
  res.c = curv.einstein_constant();
  res.h = curv.ledger_constant();
  for (const auto& x : ledger_sample(n)) {
    const Eigen::MatrixXd rx = curv.jacobi_operator(x);
    res.einstein_residual = std::max(res.einstein_residual, std::abs(rx.trace() - res.c));
    res.ledger2_residual = std::max(res.ledger2_residual, std::abs((rx * rx).trace() - res.h));
  }
  res.einstein_tensor_residual =
      (curv.ricci() - res.c * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

  // Tr R_X^2 = sum X_i X_j X_k X_l Tr(S_ij S_kl) with S_ij the symmetrized
  // coefficient matrices of R_X; compare the fully symmetrized tensor
  // with H sym(delta delta).
  const int n2 = n * n;
  Eigen::MatrixXd p(n2, n2);  // row (i,j): S_ij flattened
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
          p(i * n + j, d * n + b) = 0.5 * (curv.r4(b, i, j, d) + curv.r4(b, j, i, d));
  // S_kl is symmetric, so Tr(S_ij S_kl) is the flattened dot product
  const Eigen::MatrixXd q = p * p.transpose();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        for (int l = k; l < n; ++l) {
          const double t = (q(i * n + j, k * n + l) + q(i * n + k, j * n + l) + q(i * n + l, j * n + k)) / 3.0;
          const double target =
              res.h * (double(i == j && k == l) + double(i == k && j == l) + double(i == l && j == k)) / 3.0;
          worst = std::max(worst, std::abs(t - target));
        }
  res.ledger2_tensor_residual = worst;
  return res;
}

inline LedgerResult ledger_check(const MetricSolvableAlgebra& alg) { return ledger_check(CurvatureOracle(alg)); }

struct ScanResult {
  double max_sectional = 0.0;
  double min_sectional = 0.0;
  Eigen::VectorXd max_x, max_y;  // witness plane of the maximum
  Eigen::VectorXd min_x, min_y;
  std::size_t planes = 0;
};

inline constexpr std::uint64_t kScanSeed = 0x5EED;
inline constexpr int kScanPlanes = 10000;

/// Sectional curvature over all coordinate 2-planes and a seeded set of
/// random planes; nonpositive curvature means max_sectional <= tolerance.
inline ScanResult nonpositivity_scan(const CurvatureOracle& curv, std::uint64_t seed = kScanSeed,
                                     int random_planes = kScanPlanes) {
  const int n = curv.dim();
  ScanResult res;
  bool first = true;
  auto visit = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double k = curv.sectional_numerator(x, y);
    ++res.planes;
    if (first || k > res.max_sectional) { res.max_sectional = k; res.max_x = x; res.max_y = y; }
    if (first || k < res.min_sectional) { res.min_sectional = k; res.min_x = x; res.min_y = y; }
    first = false;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) visit(Eigen::VectorXd::Unit(n, i), Eigen::VectorXd::Unit(n, j));
  if (n >= 2) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int p = 0; p < random_planes; ++p) {
      Eigen::VectorXd x(n), y(n);
      for (int i = 0; i < n; ++i) x[i] = normal(rng);
      for (int i = 0; i < n; ++i) y[i] = normal(rng);
      x.normalize();
      y -= x.dot(y) * x;
      y.normalize();
      visit(x, y);
    }
  }
  return res;
}

}  // namespace solvharm
