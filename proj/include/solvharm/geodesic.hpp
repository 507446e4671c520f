#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "solvharm/adapted_basis.hpp"
#include "solvharm/curvature.hpp"

namespace solvharm {

/// Velocity q A + Phi Z of the unit-speed geodesic through e with initial
/// direction A cos(phi) + Z sin(phi), at arclength t.
struct GeodesicState {
  double lambda = 1.0;
  double phi = 0.0;
  double t = 0.0;
  double q = 1.0;
  double Phi = 0.0;
};

/// Closed form, evaluated with e^{-lambda|t|} scaling and half-angle terms
/// so that neither large t nor phi near 0 loses precision.
inline GeodesicState geodesic_state(double lambda, double phi, double t) {
  const double s = std::sin(phi);
  const double one_minus_c = 2.0 * std::pow(std::sin(0.5 * phi), 2);
  const double one_plus_c = 2.0 * std::pow(std::cos(0.5 * phi), 2);
  const double e = std::exp(-2.0 * lambda * std::abs(t));
  double g, num;  // both scaled by e^{-lambda |t|}
  if (t >= 0) {
    g = 0.5 * (one_minus_c + e * one_plus_c);
    num = 0.5 * (-one_minus_c + e * one_plus_c);
  } else {
    g = 0.5 * (e * one_minus_c + one_plus_c);
    num = 0.5 * (-e * one_minus_c + one_plus_c);
  }
  const double scale = std::exp(-lambda * std::abs(t));
  GeodesicState st;
  st.lambda = lambda;
  st.phi = phi;
  st.t = t;
  if (g == 0.0) {
    // phi = 0 (or pi for t < 0) with e underflowed: the geodesic is +-A itself
    st.q = t >= 0 ? 1.0 : -1.0;
    st.Phi = 0.0;
    return st;
  }
  st.q = num / g;
  st.Phi = s * scale / g;
  return st;
}

/// Jacobi operator of the geodesic velocity restricted to each block of the
/// adapted basis, in the block's own orthonormal pair.
struct RestrictedJacobi {
  std::vector<double> x;
  std::vector<Eigen::Matrix2d> y;
  std::vector<Eigen::Matrix2d> v;

  /// Block-diagonal matrix in the frame order X.., Y.., V..
  Eigen::MatrixXd assemble() const {
    const auto size = static_cast<Eigen::Index>(x.size() + 2 * y.size() + 2 * v.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
    Eigen::Index c = 0;
    for (double s : x) { m(c, c) = s; ++c; }
    for (const auto& b : y) { m.block<2, 2>(c, c) = b; c += 2; }
    for (const auto& b : v) { m.block<2, 2>(c, c) = b; c += 2; }
    return m;
  }
};

inline RestrictedJacobi restricted_jacobi(const AdaptedBasis& basis, const GeodesicState& st) {
  const double lam = basis.lambda;
  const double q = st.q, p2 = st.Phi * st.Phi;
  RestrictedJacobi out;
  for (const auto& b : basis.x) out.x.push_back(-b.lambda_j * b.lambda_j - b.lambda_j * (lam - b.lambda_j) * p2);
  for (const auto& b : basis.y) {
    const double s = -0.25 * (1.0 + p2) * lam * lam + 0.25 * p2 * b.a * b.a;
    out.y.push_back(s * Eigen::Matrix2d::Identity());
  }
  for (const auto& b : basis.v) {
    Eigen::Matrix2d m;
    const double off = 0.5 * q * st.Phi * b.b * (b.lambda_lp - b.lambda_l);
    m(0, 0) = -q * q * b.lambda_l * b.lambda_l - lam * b.lambda_l * p2 + 0.25 * p2 * b.b * b.b;
    m(1, 1) = -q * q * b.lambda_lp * b.lambda_lp - lam * b.lambda_lp * p2 + 0.25 * p2 * b.b * b.b;
    m(0, 1) = off;
    m(1, 0) = off;
    out.v.push_back(m);
  }
  return out;
}

/// -q^2 D^2 - 1/4 Phi^2 J_Z^2 - lambda Phi^2 D + 1/2 q Phi [D, J_Z] on the
/// frame of the adapted basis, assembled from full matrices on g.
inline Eigen::MatrixXd restricted_jacobi_matrix(const MetricSolvableAlgebra& alg, const AdaptedBasis& basis,
                                                const GeodesicState& st) {
  const int n = alg.dim();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  d.bottomRightCorner(n - 1, n - 1) = alg.derivation();
  const Eigen::MatrixXd j = j_operator(alg, basis.z);
  const double q = st.q, p = st.Phi;
  const Eigen::MatrixXd r = -q * q * d * d - 0.25 * p * p * j * j - basis.lambda * p * p * d + 0.5 * q * p * (d * j - j * d);
  const Eigen::MatrixXd f = basis.frame();
  return f.transpose() * r * f;
}

/// Same operator straight from the curvature tensor, R_{qA + Phi Z}.
inline Eigen::MatrixXd restricted_jacobi_tensor(const CurvatureOracle& curv, const AdaptedBasis& basis,
                                                const GeodesicState& st) {
  Eigen::VectorXd vel = st.Phi * basis.z;
  vel[0] += st.q;
  const Eigen::MatrixXd f = basis.frame();
  return f.transpose() * curv.jacobi_operator(vel) * f;
}

}  // namespace solvharm
