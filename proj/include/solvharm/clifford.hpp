#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "solvharm/errors.hpp"

namespace solvharm {

namespace detail {

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Octonion units e_1..e_7 with e_a e_b = e_c along each oriented Fano line.
inline constexpr std::array<std::array<int, 3>, 7> kFanoLines{{
    {1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 6, 5}}};

/// Left multiplication by e_unit on the span of e_0..e_{size-1}; size 2, 4
/// or 8 (complex, quaternion and octonion subalgebras).
inline Eigen::MatrixXd octonion_left(int unit, int size) {
  std::array<std::array<int, 8>, 8> idx{};
  std::array<std::array<int, 8>, 8> sign{};
  for (int i = 0; i < 8; ++i) {
    idx[0][i] = i; sign[0][i] = 1;
    idx[i][0] = i; sign[i][0] = 1;
  }
  for (int i = 1; i < 8; ++i) { idx[i][i] = 0; sign[i][i] = -1; }
  for (const auto& line : kFanoLines) {
    for (int r = 0; r < 3; ++r) {
      const int a = line[r], b = line[(r + 1) % 3], c = line[(r + 2) % 3];
      idx[a][b] = c; sign[a][b] = 1;
      idx[b][a] = c; sign[b][a] = -1;
    }
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (int j = 0; j < size; ++j) m(idx[unit][j], j) = sign[unit][j];
  return m;
}

}  // namespace detail

/// Dimension of the irreducible real module of the Clifford algebra with k
/// anticommuting generators squaring to -1 (Radon-Hurwitz).
inline int minimal_clifford_module_dim(int k) {
  static constexpr std::array<int, 9> table{1, 2, 4, 4, 8, 8, 8, 8, 16};
  int factor = 1;
  while (k > 8) {
    k -= 8;
    factor *= 16;
  }
  return factor * table[k];
}

/// k skew matrices E_i on R^m, m = minimal_clifford_module_dim(k), with
/// E_i E_j + E_j E_i = -2 delta_ij. Built from the octonions for k <= 7,
/// one tensor doubling for k = 8 and period-8 tensoring beyond.
inline std::vector<Eigen::MatrixXd> minimal_clifford_generators(int k) {
  std::vector<Eigen::MatrixXd> gens;
  if (k <= 0) return gens;
  if (k <= 7) {
    const int size = minimal_clifford_module_dim(k);
    for (int i = 1; i <= k; ++i) gens.push_back(detail::octonion_left(i, size));
    return gens;
  }
  if (k == 8) {
    Eigen::MatrixXd sigma_z(2, 2), rot(2, 2);
    sigma_z << 1, 0, 0, -1;
    rot << 0, -1, 1, 0;
    for (const auto& e : minimal_clifford_generators(7)) gens.push_back(detail::kron(e, sigma_z));
    gens.push_back(detail::kron(Eigen::MatrixXd::Identity(8, 8), rot));
    return gens;
  }
  const auto eight = minimal_clifford_generators(8);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(16, 16);
  for (const auto& f : eight) omega = omega * f;  // symmetric, squares to 1, anticommutes with each f
  const auto lower = minimal_clifford_generators(k - 8);
  const int m = minimal_clifford_module_dim(k - 8);
  for (const auto& e : lower) gens.push_back(detail::kron(e, omega));
  for (const auto& f : eight) gens.push_back(detail::kron(Eigen::MatrixXd::Identity(m, m), f));
  return gens;
}

/// J_1..J_{dim_z} skew on R^{dim_u} with J_i J_j + J_j J_i = -2 delta_ij lambda^2 id.
inline std::vector<Eigen::MatrixXd> clifford_generate(int dim_z, int dim_u, double lambda) {
  if (dim_z < 0 || dim_u < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
  if (dim_z == 0) return {};
  const int m = minimal_clifford_module_dim(dim_z);
  if (dim_u == 0 || dim_u % m != 0)
    throw Error(ErrorKind::NoCliffordModule, "dim_z=" + std::to_string(dim_z) +
                                                 " dim_u=" + std::to_string(dim_u) +
                                                 " (module dimension must be a multiple of " +
                                                 std::to_string(m) + ")");
  const int copies = dim_u / m;
  std::vector<Eigen::MatrixXd> out;
  for (const auto& g : minimal_clifford_generators(dim_z))
    out.push_back(lambda * detail::kron(Eigen::MatrixXd::Identity(copies, copies), g));
  return out;
}

}  // namespace solvharm
