#pragma once

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "solvharm/adapted_basis.hpp"
#include "solvharm/curvature.hpp"
#include "solvharm/geodesic.hpp"
#include "solvharm/rk4.hpp"

namespace solvharm {

enum class BlockKind { ScalarX, ScalarY, MatrixV };

inline const char* to_string(BlockKind k) {
  switch (k) {
    case BlockKind::ScalarX: return "scalar_x";
    case BlockKind::ScalarY: return "scalar_y";
    case BlockKind::MatrixV: return "matrix_v";
  }
  return "unknown";
}

using BlockMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;
using BlockState = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 2>;  // [value; rate]

/// One decoupled piece of the Jacobi system along the geodesic, written as
/// f'' = F(t) f + G(t) f' with f(0) = 0, f'(0) = identity.
struct BlockODE {
  BlockKind kind = BlockKind::ScalarX;
  double lambda = 1.0;
  double lambda_j = 0.0;   // scalar_x
  double a = 0.0;          // scalar_y
  double lambda_l = 0.0;   // matrix_v
  double lambda_lp = 0.0;
  double b = 0.0;

  static BlockODE scalar_x(double lambda, double lambda_j) {
    BlockODE o;
    o.kind = BlockKind::ScalarX;
    o.lambda = lambda;
    o.lambda_j = lambda_j;
    return o;
  }
  static BlockODE scalar_y(double lambda, double a) {
    BlockODE o;
    o.kind = BlockKind::ScalarY;
    o.lambda = lambda;
    o.a = a;
    return o;
  }
  static BlockODE matrix_v(double lambda, double lambda_l, double b) {
    BlockODE o;
    o.kind = BlockKind::MatrixV;
    o.lambda = lambda;
    o.lambda_l = lambda_l;
    o.lambda_lp = lambda - lambda_l;
    o.b = b;
    return o;
  }

  int size() const { return kind == BlockKind::MatrixV ? 2 : 1; }

  void coefficients(const GeodesicState& st, BlockMatrix& f, BlockMatrix& g) const {
    const double p2 = st.Phi * st.Phi, q = st.q;
    switch (kind) {
      case BlockKind::ScalarX:
        f.setConstant(1, 1, lambda_j * lambda_j + (lambda - lambda_j) * lambda_j * p2);
        g.setZero(1, 1);
        return;
      case BlockKind::ScalarY:
        f.setConstant(1, 1, 0.25 * lambda * lambda + 0.25 * (lambda * lambda - a * a) * p2);
        g.setZero(1, 1);
        return;
      case BlockKind::MatrixV:
        f.resize(2, 2);
        g.resize(2, 2);
        f(0, 0) = q * q * lambda_l * lambda_l + lambda * lambda_l * p2;
        f(0, 1) = -q * st.Phi * b * lambda_lp;
        f(1, 0) = q * st.Phi * b * lambda_l;
        f(1, 1) = q * q * lambda_lp * lambda_lp + lambda * lambda_lp * p2;
        g << 0.0, -b * st.Phi, b * st.Phi, 0.0;
        return;
    }
  }

  /// Factor contributed to V: x, y^2 or det v.
  double contribution(const BlockMatrix& value) const {
    switch (kind) {
      case BlockKind::ScalarX: return value(0, 0);
      case BlockKind::ScalarY: return value(0, 0) * value(0, 0);
      case BlockKind::MatrixV: return value.determinant();
    }
    return 0.0;
  }

  bool operator==(const BlockODE&) const = default;
};

inline constexpr int kMinSteps = 64;
inline constexpr int kDefaultSteps = 1024;

namespace detail {

inline void check_steps(int steps) {
  if (steps < kMinSteps)
    throw Error(ErrorKind::StepCountTooSmall,
                "steps = " + std::to_string(steps) + " (minimum " + std::to_string(kMinSteps) + ")");
}

template <class Coeffs>
BlockState second_order_rhs(const Coeffs& coeffs, double t, const BlockState& y) {
  BlockMatrix f, g;
  coeffs(t, f, g);
  const Eigen::Index s = f.rows();
  BlockState out(2 * s, s);
  out.topRows(s) = y.bottomRows(s);
  out.bottomRows(s) = f * y.topRows(s) + g * y.bottomRows(s);
  return out;
}

inline BlockState unit_start(Eigen::Index s) {
  BlockState y = BlockState::Zero(2 * s, s);
  y.bottomRows(s).setIdentity();
  return y;
}

}  // namespace detail

struct BlockSolution {
  BlockODE block;
  double phi = 0.0;
  std::vector<double> t;
  std::vector<BlockMatrix> value;
  std::vector<BlockMatrix> rate;

  double contribution(std::size_t i) const { return block.contribution(value[i]); }
};

/// Fixed-step RK4 on [0, t_max]; samples at every step.
inline BlockSolution integrate_block(const BlockODE& block, double phi, double t_max, int steps) {
  detail::check_steps(steps);
  if (!(t_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_max must be positive");
  auto coeffs = [&](double t, BlockMatrix& f, BlockMatrix& g) {
    block.coefficients(geodesic_state(block.lambda, phi, t), f, g);
  };
  auto rhs = [&](double t, const BlockState& y) { return detail::second_order_rhs(coeffs, t, y); };
  BlockSolution sol;
  sol.block = block;
  sol.phi = phi;
  const Eigen::Index s = block.size();
  rk4_integrate(rhs, detail::unit_start(s), 0.0, t_max, steps, [&](double t, const BlockState& y) {
    sol.t.push_back(t);
    sol.value.push_back(y.topRows(s));
    sol.rate.push_back(y.bottomRows(s));
  });
  return sol;
}

/// Final value of the block at t only.
inline BlockMatrix block_value(const BlockODE& block, double phi, double t, int steps) {
  detail::check_steps(steps);
  const Eigen::Index s = block.size();
  if (t == 0.0) return BlockMatrix::Zero(s, s);
  auto coeffs = [&](double u, BlockMatrix& f, BlockMatrix& g) {
    block.coefficients(geodesic_state(block.lambda, phi, u), f, g);
  };
  auto rhs = [&](double u, const BlockState& y) { return detail::second_order_rhs(coeffs, u, y); };
  const BlockState y = rk4_integrate(rhs, detail::unit_start(s), 0.0, t, steps);
  return y.topRows(s);
}

/// Undecoupled 2x2 system of a Y pair before the rotation substitution:
/// w'' + a Phi J w' + 1/2 a Phi' J w - 1/4 lambda^2 (1 + Phi^2) w = 0.
inline Eigen::Matrix2d integrate_y_raw(double lambda, double a, double phi, double t, int steps) {
  detail::check_steps(steps);
  auto coeffs = [&](double u, BlockMatrix& f, BlockMatrix& g) {
    const auto st = geodesic_state(lambda, phi, u);
    const double phidot = lambda * st.q * st.Phi;
    Eigen::Matrix2d jm;
    jm << 0.0, 1.0, -1.0, 0.0;
    f = 0.25 * lambda * lambda * (1.0 + st.Phi * st.Phi) * Eigen::Matrix2d::Identity() - 0.5 * a * phidot * jm;
    g = -a * st.Phi * jm;
  };
  auto rhs = [&](double u, const BlockState& y) { return detail::second_order_rhs(coeffs, u, y); };
  const BlockState y = rk4_integrate(rhs, detail::unit_start(2), 0.0, t, steps);
  return y.topRows(2);
}

/// Block equations of an adapted basis.
inline std::vector<BlockODE> block_odes(const AdaptedBasis& basis) {
  std::vector<BlockODE> out;
  for (const auto& b : basis.x) out.push_back(BlockODE::scalar_x(basis.lambda, b.lambda_j));
  for (const auto& b : basis.y) out.push_back(BlockODE::scalar_y(basis.lambda, b.a));
  for (const auto& b : basis.v) {
    auto o = BlockODE::matrix_v(basis.lambda, b.lambda_l, b.b);
    o.lambda_lp = b.lambda_lp;
    out.push_back(o);
  }
  return out;
}

/// V(t, phi) = sinh(lambda t)/lambda times the block contributions.
/// Identical blocks are integrated once.
inline double volume_density(const AdaptedBasis& basis, double phi, double t, int steps = kDefaultSteps) {
  detail::check_steps(steps);
  const double lam = basis.lambda;
  double v = std::sinh(lam * t) / lam;
  if (t == 0.0) return 0.0;
  std::vector<std::pair<BlockODE, int>> groups;
  for (const auto& b : block_odes(basis)) {
    bool found = false;
    for (auto& g : groups)
      if (g.first == b) { ++g.second; found = true; break; }
    if (!found) groups.emplace_back(b, 1);
  }
  for (const auto& [b, count] : groups) v *= std::pow(b.contribution(block_value(b, phi, t, steps)), count);
  return v;
}

inline double volume_density(const MetricSolvableAlgebra& alg, const Eigen::VectorXd& z, double phi, double t,
                             int steps = kDefaultSteps) {
  return volume_density(adapted_basis(alg, z), phi, t, steps);
}

/// Independent route: the full Jacobi system on the orthogonal complement
/// of span(A, Z) in an arbitrary orthonormal frame, with the covariant
/// derivative and curvature read off the connection table and the tensor.
/// w'' + 2 C w' + (C' + C^2 + R) w = 0, C = q nabla_A + Phi nabla_Z.
inline double volume_density_frame(const CurvatureOracle& curv, const Eigen::VectorXd& z, double lambda, double phi,
                                   double t, int steps = kDefaultSteps) {
  detail::check_steps(steps);
  if (t == 0.0) return 0.0;
  const auto& alg = curv.algebra();
  const int n = alg.dim();
  Eigen::MatrixXd plane(n, 2);
  plane.col(0) = Eigen::VectorXd::Unit(n, 0);
  plane.col(1) = z;
  // orthonormal complement of span(A, Z)
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(plane);
  const Eigen::MatrixXd qfull = qr.householderQ();
  const Eigen::MatrixXd frame = qfull.rightCols(n - 2);
  const int d = n - 2;
  const ConnectionTable conn(alg);
  const Eigen::MatrixXd na = frame.transpose() * conn.nabla(0) * frame;
  Eigen::MatrixXd nz_full = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    if (z[k] != 0.0) nz_full += z[k] * conn.nabla(k);
  const Eigen::MatrixXd nz = frame.transpose() * nz_full * frame;
  double v = std::sinh(lambda * t) / lambda;
  if (d == 0) return v;
  auto rhs = [&](double u, const Eigen::MatrixXd& y) {
    const auto st = geodesic_state(lambda, phi, u);
    const Eigen::MatrixXd c = st.q * na + st.Phi * nz;
    const Eigen::MatrixXd cdot = -lambda * st.Phi * st.Phi * na + lambda * st.q * st.Phi * nz;
    Eigen::VectorXd vel = st.Phi * z;
    vel[0] += st.q;
    const Eigen::MatrixXd r = frame.transpose() * curv.jacobi_operator(vel) * frame;
    Eigen::MatrixXd out(2 * d, d);
    out.topRows(d) = y.bottomRows(d);
    out.bottomRows(d) = -2.0 * c * y.bottomRows(d) - (cdot + c * c + r) * y.topRows(d);
    return out;
  };
  Eigen::MatrixXd y0 = Eigen::MatrixXd::Zero(2 * d, d);
  y0.bottomRows(d).setIdentity();
  const Eigen::MatrixXd y = rk4_integrate(rhs, y0, 0.0, t, steps);
  return v * y.topRows(d).determinant();
}

/// prod over Delta of (sinh(alpha t)/alpha)^{n_alpha}
inline double volume_density_closed_form(const SpectralData& spec, double t) {
  double v = 1.0;
  for (const auto& e : spec.entries) v *= std::pow(std::sinh(e.alpha * t) / e.alpha, e.multiplicity);
  return v;
}

/// Reduction-of-order solution of the scalar_x equation,
/// g^{mu} int_0^t g^{-2 mu} du with g = cosh(lambda u) - cos(phi) sinh(lambda u)
/// and mu = lambda_j / lambda, by adaptive Gauss-Kronrod quadrature.
inline double closed_form_x(double lambda_j, double lambda, double phi, double t) {
  if (!(lambda > 0.0) || !(lambda_j > 0.0) || lambda_j > lambda * (1.0 + 1e-12))
    throw Error(ErrorKind::InvalidArgument, "closed_form_x needs 0 < lambda_j <= lambda");
  if (t == 0.0) return 0.0;
  const double c = std::cos(phi);
  const double mu = lambda_j / lambda;
  // log g, stable for large lambda u
  auto log_g = [&](double u) {
    const double e = std::exp(-2.0 * lambda * std::abs(u));
    const double sgn = u >= 0 ? 1.0 : -1.0;
    return lambda * std::abs(u) + std::log(0.5 * ((1.0 + e) - sgn * c * (1.0 - e)));
  };
  auto integrand = [&](double u) { return std::exp(-2.0 * mu * log_g(u)); };
  double err = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, t, 10, 1e-12, &err);
  return std::exp(mu * log_g(t)) * integral;
}

/// t_i = t0 + (i + 1)(t1 - t0)/nt, phi_j = phi0 + j (phi1 - phi0)/nphi.
struct PhiScanGrid {
  double t0 = 0.1, t1 = 2.0;
  int nt = 20;
  double phi0 = 0.0, phi1 = std::numbers::pi;
  int nphi = 20;

  double t(int i) const { return t0 + (i + 1) * (t1 - t0) / nt; }
  double phi(int j) const { return phi0 + j * (phi1 - phi0) / nphi; }
};

struct DensitySample {
  double t = 0.0, phi = 0.0, v = 0.0, ratio = 1.0;
};

/// V on the grid plus V(t, phi)/V(t, 0). Columns may be evaluated
/// concurrently; the result order is fixed.
inline std::vector<DensitySample> density_profile(const AdaptedBasis& basis, const PhiScanGrid& grid, int steps,
                                                  bool parallel = false) {
  detail::check_steps(steps);
  if (grid.nt < 1 || grid.nphi < 1) throw Error(ErrorKind::InvalidArgument, "grid must be nonempty");
  std::vector<double> ref(grid.nt);
  for (int i = 0; i < grid.nt; ++i) ref[i] = volume_density(basis, 0.0, grid.t(i), steps);
  auto column = [&](int j) {
    std::vector<DensitySample> col;
    for (int i = 0; i < grid.nt; ++i) {
      DensitySample s;
      s.t = grid.t(i);
      s.phi = grid.phi(j);
      s.v = volume_density(basis, s.phi, s.t, steps);
      s.ratio = s.v / ref[i];
      col.push_back(s);
    }
    return col;
  };
  std::vector<std::vector<DensitySample>> cols(grid.nphi);
  if (parallel) {
    std::vector<std::future<std::vector<DensitySample>>> futs;
    for (int j = 0; j < grid.nphi; ++j) futs.push_back(std::async(std::launch::async, column, j));
    for (int j = 0; j < grid.nphi; ++j) cols[j] = futs[j].get();
  } else {
    for (int j = 0; j < grid.nphi; ++j) cols[j] = column(j);
  }
  std::vector<DensitySample> out;
  for (int i = 0; i < grid.nt; ++i)
    for (int j = 0; j < grid.nphi; ++j) out.push_back(cols[j][i]);
  return out;
}

struct PhiScanResult {
  double max_rel_dev = 0.0;
  double t_arg = 0.0, phi_arg = 0.0;
};

inline PhiScanResult phi_independence_scan(const AdaptedBasis& basis, const PhiScanGrid& grid,
                                           int steps = kDefaultSteps, bool parallel = false) {
  if (grid.t(0) < 0.05 / basis.lambda)
    throw Error(ErrorKind::InvalidArgument, "grid t values must stay above 0.05/lambda");
  PhiScanResult res;
  for (const auto& s : density_profile(basis, grid, steps, parallel)) {
    const double dev = std::abs(s.ratio - 1.0);
    if (dev > res.max_rel_dev) {
      res.max_rel_dev = dev;
      res.t_arg = s.t;
      res.phi_arg = s.phi;
    }
  }
  return res;
}

inline PhiScanResult phi_independence_scan(const MetricSolvableAlgebra& alg, const Eigen::VectorXd& z,
                                           const PhiScanGrid& grid, int steps = kDefaultSteps) {
  return phi_independence_scan(adapted_basis(alg, z), grid, steps);
}

}  // namespace solvharm
