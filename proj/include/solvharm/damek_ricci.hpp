#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "solvharm/algebra.hpp"
#include "solvharm/clifford.hpp"

namespace solvharm {

/// Damek-Ricci algebra: basis A, u_1..u_{dim_u}, z_1..z_{dim_z} with
/// ad_A = lambda/2 on u, lambda on z and [u_a, u_b] = sum_z <J_z u_a, u_b> z,
/// where J_z^2 = -lambda^2 id. dim_u = 0 gives real hyperbolic space.
inline MetricSolvableAlgebra build_damek_ricci(int dim_z, int dim_u, double lambda,
                                               std::optional<Rational> exact_lambda = {}) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  if (dim_z < 1)
    throw Error(ErrorKind::InvalidArgument, "dim_z must be at least 1 (got " + std::to_string(dim_z) + ")");
  if (dim_u < 0) throw Error(ErrorKind::InvalidArgument, "dim_u must be nonnegative");
  const auto gens = dim_u > 0 ? clifford_generate(dim_z, dim_u, 1.0) : std::vector<Eigen::MatrixXd>{};
  const int n = 1 + dim_u + dim_z;
  const auto sz = static_cast<std::size_t>(n);
  std::vector<double> c(sz * sz * sz, 0.0);
  std::vector<Rational> exact(sz * sz * sz);
  auto set = [&](int i, int j, int k, double unit) {
    // unit is an exact small integer; the constant is unit * scale
    c[(static_cast<std::size_t>(i) * n + j) * n + k] = unit * lambda;
    c[(static_cast<std::size_t>(j) * n + i) * n + k] = -unit * lambda;
    if (exact_lambda) {
      const Rational v = Rational(static_cast<long long>(std::lround(unit * 2))) / 2 * *exact_lambda;
      exact[(static_cast<std::size_t>(i) * n + j) * n + k] = v;
      exact[(static_cast<std::size_t>(j) * n + i) * n + k] = -v;
    }
  };
  for (int a = 0; a < dim_u; ++a) set(0, 1 + a, 1 + a, 0.5);
  for (int z = 0; z < dim_z; ++z) set(0, 1 + dim_u + z, 1 + dim_u + z, 1.0);
  for (int z = 0; z < dim_z; ++z)
    for (int a = 0; a < dim_u; ++a)
      for (int b = a + 1; b < dim_u; ++b) {
        const double v = gens[z](b, a);  // <J_z u_a, u_b>, entries in {0, +-1}
        if (v != 0.0) set(1 + a, 1 + b, 1 + dim_u + z, v);
      }
  if (exact_lambda) return MetricSolvableAlgebra::from_constants(n, std::move(c), std::move(exact));
  return MetricSolvableAlgebra::from_constants(n, std::move(c));
}

/// Same algebra in a seeded random orthonormal basis of u and of z.
inline MetricSolvableAlgebra build_damek_ricci_rotated(int dim_z, int dim_u, double lambda,
                                                       std::uint64_t seed) {
  const auto alg = build_damek_ricci(dim_z, dim_u, lambda);
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(alg.dim(), alg.dim());
  if (dim_u > 0) q.block(1, 1, dim_u, dim_u) = random_orthogonal(dim_u, rng);
  q.block(1 + dim_u, 1 + dim_u, dim_z, dim_z) = random_orthogonal(dim_z, rng);
  return change_basis(alg, q);
}

}  // namespace solvharm
