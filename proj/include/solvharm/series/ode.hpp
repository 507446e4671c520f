#pragma once

#include <string>
#include <vector>

#include "solvharm/density.hpp"
#include "solvharm/series/truncated.hpp"

namespace solvharm {

/// Block data with lambda normalized to 1. Only a^2 and b^2 enter the
/// series, so irrational a, b with rational squares stay exact.
struct RationalBlock {
  BlockKind kind = BlockKind::ScalarX;
  Rational lambda_j = 0;  // scalar_x
  Rational a2 = 0;        // scalar_y
  Rational lambda_l = 0;  // matrix_v, partner 1 - lambda_l
  Rational b2 = 0;

  static RationalBlock scalar_x(Rational lambda_j) {
    RationalBlock b;
    b.kind = BlockKind::ScalarX;
    b.lambda_j = std::move(lambda_j);
    return b;
  }
  static RationalBlock scalar_y(Rational a2) {
    RationalBlock b;
    b.kind = BlockKind::ScalarY;
    b.a2 = std::move(a2);
    return b;
  }
  static RationalBlock matrix_v(Rational lambda_l, Rational b2) {
    RationalBlock b;
    b.kind = BlockKind::MatrixV;
    b.lambda_l = std::move(lambda_l);
    b.b2 = std::move(b2);
    return b;
  }

  Rational lambda_lp() const { return Rational(1) - lambda_l; }
  int size() const { return kind == BlockKind::MatrixV ? 2 : 1; }
  /// The primary function (x, y or det v) starts at t^m.
  int leading_power() const { return kind == BlockKind::MatrixV ? 2 : 1; }

  friend bool operator==(const RationalBlock&, const RationalBlock&) = default;
};

/// Series of the geodesic data in (t, c, s) for lambda = 1.
struct GeodesicSeries {
  BiSeries g;     // cosh t - c sinh t
  BiSeries ginv;
  BiSeries phi;   // Phi = s/g
  BiSeries phi2;  // Phi^2 = (1 - c^2)/g^2
  BiSeries qphi;  // q Phi = s (c cosh t - sinh t)/g^2
  BiSeries q2;    // q^2 = 1 - Phi^2
};

inline GeodesicSeries geodesic_series(int order) {
  GeodesicSeries gs;
  gs.g = BiSeries(order);
  BiSeries qnum(order);
  for (int k = 0; k <= order; ++k) {
    const Rational inv = Rational(1) / Rational(series::factorial(k));
    if (k % 2 == 0) {
      gs.g[k] = PolyCS(inv);
      qnum[k] = PolyCS(PolyC::c() * inv);
    } else {
      gs.g[k] = PolyCS(PolyC::c() * (-inv));
      qnum[k] = PolyCS(-inv);
    }
  }
  gs.ginv = gs.g.inverse();
  const BiSeries ginv2 = gs.ginv * gs.ginv;
  gs.phi = gs.ginv;
  for (int k = 0; k <= order; ++k) gs.phi[k] = gs.phi[k] * PolyCS::s();
  gs.phi2 = ginv2;
  const PolyCS one_minus_c2(PolyC(std::vector<Rational>{1, 0, -1}));
  for (int k = 0; k <= order; ++k) gs.phi2[k] = gs.phi2[k] * one_minus_c2;
  gs.qphi = qnum * ginv2;
  for (int k = 0; k <= order; ++k) gs.qphi[k] = gs.qphi[k] * PolyCS::s();
  gs.q2 = BiSeries::constant(order, PolyCS(1)) - gs.phi2;
  return gs;
}

/// f = f0 + phi f1 + (phi^2/2) f2 + o(phi^2) for every t-coefficient.
struct PhiParts {
  RSeries f0, f1, f2;
};

/// For e(c) + s o(c) with c = cos(phi), s = sin(phi):
/// f0 = e(1), f1 = o(1), f2 = -e'(1).
inline PhiParts phi_parts(const BiSeries& b) {
  PhiParts p{RSeries(b.order()), RSeries(b.order()), RSeries(b.order())};
  for (int k = 0; k <= b.order(); ++k) {
    p.f0[k] = b[k].even.eval(Rational(1));
    p.f1[k] = b[k].odd.eval(Rational(1));
    p.f2[k] = -b[k].even.derivative().eval(Rational(1));
  }
  return p;
}

struct OdeSeries {
  RationalBlock block;
  int order = 0;
  std::vector<BiSeries> entries;  // row-major solution matrix (v conjugated by diag(1, b))
  BiSeries primary;               // x, y or det v
  PhiParts parts;                 // of the primary function
};

/// Exact Taylor solution of f'' = F f + G f', f(0) = 0, f'(0) = I, by the
/// coefficient recurrence (k+2)(k+1) X_{k+2} = sum F_i X_{k-i} + sum G_i (k-i+1) X_{k-i+1}.
/// The v block is conjugated by diag(1, b) so that only b^2 appears; the
/// determinant is unchanged.
namespace detail {

inline OdeSeries solve_ode_series(const RationalBlock& block, int order, const GeodesicSeries& gs) {
  const GeodesicSeries* geo = &gs;
  const int s = block.size();
  const int ne = s * s;
  std::vector<BiSeries> f(ne, BiSeries(order)), g(ne, BiSeries(order));
  const BiSeries one = BiSeries::constant(order, PolyCS(1));
  switch (block.kind) {
    case BlockKind::ScalarX: {
      const Rational& lj = block.lambda_j;
      f[0] = one * (lj * lj) + geo->phi2 * ((Rational(1) - lj) * lj);
      break;
    }
    case BlockKind::ScalarY:
      f[0] = one * Rational(1, 4) + geo->phi2 * ((Rational(1) - block.a2) / 4);
      break;
    case BlockKind::MatrixV: {
      const Rational& l = block.lambda_l;
      const Rational lp = block.lambda_lp();
      f[0] = geo->q2 * (l * l) + geo->phi2 * l;
      f[1] = geo->qphi * (-block.b2 * lp);
      f[2] = geo->qphi * l;
      f[3] = geo->q2 * (lp * lp) + geo->phi2 * lp;
      g[1] = geo->phi * (-block.b2);
      g[2] = geo->phi;
      break;
    }
  }
  std::vector<std::vector<PolyCS>> x(order + 1, std::vector<PolyCS>(ne));
  for (int d = 0; d < s; ++d) x[1][d * s + d] = PolyCS(1);
  for (int k = 0; k + 2 <= order; ++k) {
    std::vector<PolyCS> acc(ne);
    for (int i = 0; i <= k; ++i) {
      const Rational w = k - i + 1;
      for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c) {
          PolyCS sum;
          for (int m = 0; m < s; ++m) {
            const PolyCS& fi = f[r * s + m][i];
            if (!fi.is_zero() && !x[k - i][m * s + c].is_zero()) sum += fi * x[k - i][m * s + c];
            const PolyCS& gi = g[r * s + m][i];
            if (!gi.is_zero() && !x[k - i + 1][m * s + c].is_zero()) sum += (gi * x[k - i + 1][m * s + c]) * w;
          }
          acc[r * s + c] += sum;
        }
    }
    const Rational denom = Rational((k + 2) * (k + 1));
    for (int e = 0; e < ne; ++e) x[k + 2][e] = acc[e] * (Rational(1) / denom);
  }
  OdeSeries out;
  out.block = block;
  out.order = order;
  for (int e = 0; e < ne; ++e) {
    BiSeries b(order);
    for (int k = 0; k <= order; ++k) b[k] = x[k][e];
    out.entries.push_back(std::move(b));
  }
  out.primary = s == 1 ? out.entries[0] : out.entries[0] * out.entries[3] - out.entries[1] * out.entries[2];
  out.parts = phi_parts(out.primary);
  return out;
}

}  // namespace detail

inline OdeSeries ode_series(const RationalBlock& block, int order) {
  if (order > kMaxSeriesOrder)
    throw Error(ErrorKind::OrderTooLarge,
                "order " + std::to_string(order) + " exceeds " + std::to_string(kMaxSeriesOrder));
  if (order < 2) throw Error(ErrorKind::InvalidArgument, "order must be at least 2");
  return detail::solve_ode_series(block, order, geodesic_series(order));
}

/// Coefficient of phi^2 in f(t, phi)/f(t, 0), i.e. f2/(2 f0), through
/// order - leading_power.
inline RSeries relative_phi2(const OdeSeries& os) {
  const int m = os.block.leading_power();
  const RSeries f0 = os.parts.f0.shift_down(m);
  const RSeries f2 = os.parts.f2.shift_down(m);
  return f2 * f0.inverse() * Rational(1, 2);
}

}  // namespace solvharm
