#pragma once

#include <algorithm>
#include <array>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "solvharm/adapted_basis.hpp"
#include "solvharm/errors.hpp"
#include "solvharm/series/coth.hpp"
#include "solvharm/series/ode.hpp"

namespace solvharm {

inline constexpr std::int64_t kRationalMaxDen = 10'000;
inline constexpr double kRationalTol = 1e-9;

namespace detail {

inline Rational rational_or_throw(double x, const std::string& what) {
  auto r = rationalize(x, kRationalMaxDen, kRationalTol);
  if (!r) throw Error(ErrorKind::NotRational, what + " = " + std::to_string(x) + " is not a small rational");
  return *r;
}

}  // namespace detail

/// Block data of an adapted basis divided by lambda (a^2, b^2 by lambda^2).
inline std::vector<RationalBlock> rational_blocks(const AdaptedBasis& basis) {
  const double lam = basis.lambda;
  std::vector<RationalBlock> out;
  for (std::size_t i = 0; i < basis.x.size(); ++i)
    out.push_back(RationalBlock::scalar_x(
        detail::rational_or_throw(basis.x[i].lambda_j / lam, "x[" + std::to_string(i) + "].lambda_j/lambda")));
  for (std::size_t i = 0; i < basis.y.size(); ++i) {
    const double a = basis.y[i].a / lam;
    out.push_back(RationalBlock::scalar_y(detail::rational_or_throw(a * a, "y[" + std::to_string(i) + "].a^2/lambda^2")));
  }
  for (std::size_t i = 0; i < basis.v.size(); ++i) {
    const double b = basis.v[i].b / lam;
    out.push_back(RationalBlock::matrix_v(
        detail::rational_or_throw(basis.v[i].lambda_l / lam, "v[" + std::to_string(i) + "].lambda_l/lambda"),
        detail::rational_or_throw(b * b, "v[" + std::to_string(i) + "].b^2/lambda^2")));
  }
  return out;
}

/// Weight of a block in the volume density: y enters squared.
inline int volume_weight(const RationalBlock& b) { return b.kind == BlockKind::ScalarY ? 2 : 1; }

/// The coth combination multiplying (phi^2/2) e^t sinh t in V(t, phi)/V(t, 0).
inline CothCombo volume_combo(const std::vector<RationalBlock>& blocks) {
  CothCombo total;
  for (const auto& b : blocks) total += phi2_hat(b) * Rational(volume_weight(b));
  return total;
}

struct CothConstraint {
  Rational mu;
  Rational coefficient;
  std::vector<std::pair<int, Rational>> terms;  // (block index, weighted contribution)
  bool vanishes = true;
};

struct DerivedIdentity {
  std::string name;  // "pairing" (2 alpha n_alpha = sum b^2) or "half" (n_{1/2} = 2 sum a^2)
  Rational alpha;
  Rational lhs;
  Rational rhs;
  bool holds = true;
};

struct Sum0Report {
  CothCombo total;
  std::vector<CothConstraint> constraints;  // one per frequency, ascending mu
  std::vector<DerivedIdentity> identities;  // ascending alpha
  bool all_vanish = true;
};

/// Coefficient of every coth frequency in the phi^2 term of V, block by
/// block, plus the per-eigenvalue identities the vanishing implies for
/// alpha != 1.
inline Sum0Report sum0_constraints(const std::vector<RationalBlock>& blocks) {
  Sum0Report rep;
  std::map<Rational, CothConstraint> by_mu;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const CothCombo h = phi2_hat(blocks[i]) * Rational(volume_weight(blocks[i]));
    for (const auto& [mu, c] : h.terms()) {
      auto& con = by_mu[mu];
      con.mu = mu;
      con.coefficient += c;
      con.terms.emplace_back(static_cast<int>(i), c);
    }
    rep.total += h;
  }
  for (auto& [mu, con] : by_mu) {
    con.vanishes = con.coefficient == 0;
    rep.all_vanish = rep.all_vanish && con.vanishes;
    rep.constraints.push_back(std::move(con));
  }

  // n_alpha counts basis vectors of the blocks in the alpha eigenspace.
  std::map<Rational, Rational> n_alpha, b2_sum;
  Rational a2_sum = 0;
  for (const auto& b : blocks) {
    switch (b.kind) {
      case BlockKind::ScalarX:
        n_alpha[b.lambda_j] += 1;
        break;
      case BlockKind::ScalarY:
        n_alpha[Rational(1, 2)] += 2;
        a2_sum += b.a2;
        break;
      case BlockKind::MatrixV:
        n_alpha[b.lambda_l] += 1;
        n_alpha[b.lambda_lp()] += 1;
        b2_sum[b.lambda_l] += b.b2;
        b2_sum[b.lambda_lp()] += b.b2;
        break;
    }
  }
  for (const auto& [alpha, n] : n_alpha) {
    if (alpha == 1) continue;
    DerivedIdentity id;
    id.alpha = alpha;
    if (alpha == Rational(1, 2)) {
      id.name = "half";
      id.lhs = n;
      id.rhs = 2 * a2_sum;
    } else {
      id.name = "pairing";
      id.lhs = 2 * alpha * n;
      id.rhs = b2_sum[alpha];
    }
    id.holds = id.lhs == id.rhs;
    rep.identities.push_back(std::move(id));
  }
  return rep;
}

/// Coefficient of phi^2 in V(t, phi)/V(t, 0) assembled from the coth
/// combinations, through t^order.
inline RSeries volume_taylor(const std::vector<RationalBlock>& blocks, int order) {
  if (order > kMaxSeriesOrder)
    throw Error(ErrorKind::OrderTooLarge,
                "order " + std::to_string(order) + " exceeds " + std::to_string(kMaxSeriesOrder));
  return combo_series(volume_combo(blocks), order);
}

/// Same coefficient read off the product of the exact ODE solutions. Each
/// block is solved to order + 2 so that the quotient by its leading power
/// keeps order terms. Exact arithmetic makes the parallel result identical.
inline RSeries volume_phi2_from_ode(const std::vector<RationalBlock>& blocks, int order, bool parallel = false) {
  if (order > kMaxSeriesOrder)
    throw Error(ErrorKind::OrderTooLarge,
                "order " + std::to_string(order) + " exceeds " + std::to_string(kMaxSeriesOrder));
  const int inner = order + 2;
  const GeodesicSeries geo = geodesic_series(inner);
  // distinct blocks with multiplicity
  std::vector<std::pair<RationalBlock, int>> groups;
  for (const auto& b : blocks) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == b; });
    if (it == groups.end()) groups.emplace_back(b, 1);
    else ++it->second;
  }
  auto normalized = [&](const RationalBlock& b) {
    return detail::solve_ode_series(b, inner, geo).primary.shift_down(b.leading_power()).truncated(order);
  };
  std::vector<BiSeries> parts(groups.size());
  if (parallel) {
    std::vector<std::future<BiSeries>> futs;
    for (const auto& g : groups) futs.push_back(std::async(std::launch::async, normalized, g.first));
    for (std::size_t i = 0; i < futs.size(); ++i) parts[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < groups.size(); ++i) parts[i] = normalized(groups[i].first);
  }
  BiSeries prod = BiSeries::constant(order, PolyCS(1));
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const int power = groups[i].second * volume_weight(groups[i].first);
    for (int p = 0; p < power; ++p) prod = prod * parts[i];
  }
  const PhiParts pp = phi_parts(prod);
  return pp.f2 * pp.f0.inverse() * Rational(1, 2);
}

/// Exact data of the Delta = {1/3, 2/3, 1} instance: one x block with
/// lambda_j = 1/3 and one v block with lambda_l = 1/3, b^2 = 4/3.
struct ThirdsResult {
  BiSeries product;                  // x det v through t^9
  std::array<PolyC, 4> odd_coeffs;   // t^3, t^5, t^7, t^9
  bool sine_free = true;             // no odd powers of sin(phi)
  bool even_coeffs_vanish = true;    // t^0, t^2, ..., t^8
  RSeries closed_form;               // phi = 0 product from the sinh factors
  bool phi0_matches = false;
  BiSeries volume_normalized;        // V(t, phi)/t^(n-1) through t^6
  RSeries volume_phi0_normalized;    // V(t, 0)/t^(n-1) through t^6
  int first_phi_dependent_order = -1;  // smallest k with t^k in V(t, phi) depending on phi
};

inline RationalBlock thirds_x_block() { return RationalBlock::scalar_x(Rational(1, 3)); }
inline RationalBlock thirds_v_block() { return RationalBlock::matrix_v(Rational(1, 3), Rational(4, 3)); }

inline ThirdsResult thirds_t9(int n_lambda = 1, int n_23 = 1) {
  if (n_lambda < 1 || n_23 < 1) throw Error(ErrorKind::InvalidArgument, "multiplicities must be positive");
  constexpr int order = 9;
  const GeodesicSeries geo = geodesic_series(order);
  const OdeSeries xs = detail::solve_ode_series(thirds_x_block(), order, geo);
  const OdeSeries vs = detail::solve_ode_series(thirds_v_block(), order, geo);
  ThirdsResult r;
  r.product = xs.primary * vs.primary;
  for (int k = 0; k <= order; ++k) {
    if (!r.product[k].odd.is_zero()) r.sine_free = false;
    if (k % 2 == 0 && !r.product[k].is_zero()) r.even_coeffs_vanish = false;
  }
  for (int i = 0; i < 4; ++i) r.odd_coeffs[i] = r.product[3 + 2 * i].even;

  const RSeries s13 = series::sinh(order, Rational(1, 3)) * Rational(3);
  const RSeries s23 = series::sinh(order, Rational(2, 3)) * Rational(3, 2);
  r.closed_form = s13 * s13 * s23;
  r.phi0_matches = true;
  for (int k = 0; k <= order; ++k)
    if (r.product[k].even.eval(Rational(1)) != r.closed_form[k] || !r.product[k].odd.is_zero())
      r.phi0_matches = false;

  // V/t^(n-1) = (sinh t/t)^n_lambda (x det v/t^3)^n_23, relative order 6
  const BiSeries rel = r.product.shift_down(3);
  const RSeries rel0 = r.closed_form.shift_down(3);
  const RSeries sc = series::sinhc(order - 3, 1);
  BiSeries vol = BiSeries::constant(order - 3, PolyCS(1));
  RSeries vol0 = RSeries::constant(order - 3, 1);
  for (int i = 0; i < n_lambda; ++i) {
    vol = vol * series::lift(sc);
    vol0 = vol0 * sc;
  }
  for (int i = 0; i < n_23; ++i) {
    vol = vol * rel;
    vol0 = vol0 * rel0;
  }
  r.volume_normalized = vol;
  r.volume_phi0_normalized = vol0;
  for (int k = 0; k <= vol.order(); ++k)
    if (!vol[k].odd.is_zero() || !vol[k].even.is_constant()) {
      r.first_phi_dependent_order = k + n_lambda + 3 * n_23;
      break;
    }
  return r;
}

}  // namespace solvharm
