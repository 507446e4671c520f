#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <vector>

#include "solvharm/adapted_basis.hpp"

namespace solvharm {

struct JOperator {
  Eigen::VectorXd z;
  Eigen::MatrixXd matrix;  // J_Z on all of g
  AdaptedBasis blocks;
};

/// One J_Z per canonical basis vector Z of n_lambda.
struct JOperatorFamily {
  double lambda = 0.0;
  std::vector<JOperator> ops;
};

inline JOperatorFamily j_family(const MetricSolvableAlgebra& alg, const SpectralData& spec) {
  JOperatorFamily fam;
  fam.lambda = spec.lambda;
  const auto& top = spec.top();
  for (int i = 0; i < top.multiplicity; ++i) {
    const Eigen::VectorXd z = top.basis.col(i);
    fam.ops.push_back({z, j_operator(alg, z), adapted_basis(alg, spec, z)});
  }
  return fam;
}

/// Worst-case deviations from the J-operator invariants.
struct JInvariantResiduals {
  double skew = 0.0;          // J_Z + J_Z^t
  double bracket = 0.0;       // <J_Z U, V> - <Z, [U, V]>
  double grading = 0.0;       // J_Z n_alpha leaving n_{lambda-alpha}
  double commutator = 0.0;    // [J_Z^2, D] on n minus Z
  double block_relations = 0.0;
};

inline JInvariantResiduals j_invariants(const MetricSolvableAlgebra& alg, const SpectralData& spec,
                                        const JOperatorFamily& fam) {
  JInvariantResiduals r;
  const int n = alg.dim();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  d.bottomRightCorner(n - 1, n - 1) = alg.derivation();
  for (const auto& op : fam.ops) {
    const auto& j = op.matrix;
    r.skew = std::max(r.skew, (j + j.transpose()).cwiseAbs().maxCoeff());
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        const Eigen::VectorXd b = alg.bracket(Eigen::VectorXd::Unit(n, u), Eigen::VectorXd::Unit(n, v));
        r.bracket = std::max(r.bracket, std::abs(j(v, u) - op.z.dot(b)));
      }
    for (const auto& e : spec.entries) {
      const auto* target = spec.find(spec.lambda - e.alpha);
      for (int c = 0; c < e.multiplicity; ++c) {
        const Eigen::VectorXd w = j * e.basis.col(c);
        if (spec.same(e.alpha, spec.lambda)) {
          // n_lambda maps into span(A): J_Z Z = -lambda A
          Eigen::VectorXd rest = w;
          rest[0] = 0.0;
          r.grading = std::max(r.grading, rest.norm());
        } else {
          const double off = target ? (w - spec.projection(*target, w)).norm() : w.norm();
          r.grading = std::max(r.grading, off);
        }
      }
    }
    const Eigen::MatrixXd frame = op.blocks.frame();
    if (frame.cols() > 0) {
      const Eigen::MatrixXd j2 = frame.transpose() * j * j * frame;
      const Eigen::MatrixXd dt = frame.transpose() * d * frame;
      r.commutator = std::max(r.commutator, (j2 * dt - dt * j2).cwiseAbs().maxCoeff());
    }
    for (const auto& x : op.blocks.x) {
      r.block_relations = std::max(r.block_relations, (j * x.x).norm());
      r.block_relations = std::max(r.block_relations, (d * x.x - x.lambda_j * x.x).norm());
    }
    for (const auto& y : op.blocks.y) {
      r.block_relations = std::max(r.block_relations, (j * y.y1 - y.a * y.y2).norm());
      r.block_relations = std::max(r.block_relations, (j * y.y2 + y.a * y.y1).norm());
    }
    for (const auto& v : op.blocks.v) {
      r.block_relations = std::max(r.block_relations, (j * v.v1 - v.b * v.v2).norm());
      r.block_relations = std::max(r.block_relations, (j * v.v2 + v.b * v.v1).norm());
      r.block_relations = std::max(r.block_relations, (d * v.v1 - v.lambda_l * v.v1).norm());
      r.block_relations = std::max(r.block_relations, (d * v.v2 - v.lambda_lp * v.v2).norm());
    }
  }
  return r;
}

}  // namespace solvharm
