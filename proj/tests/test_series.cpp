#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace solvharm;
namespace sr = solvharm::series;

namespace {

Rational R(long long p, long long q = 1) { return Rational(p, q); }

std::vector<RationalBlock> x_sets() {
  return {RationalBlock::scalar_x(R(1, 3)), RationalBlock::scalar_x(R(1, 2)), RationalBlock::scalar_x(R(2, 3)),
          RationalBlock::scalar_x(R(1, 5)), RationalBlock::scalar_x(R(7, 10))};
}
std::vector<RationalBlock> y_sets() {
  return {RationalBlock::scalar_y(R(1)), RationalBlock::scalar_y(R(1, 2)), RationalBlock::scalar_y(R(0)),
          RationalBlock::scalar_y(R(1, 4)), RationalBlock::scalar_y(R(3, 7))};
}
std::vector<RationalBlock> v_sets() {
  return {RationalBlock::matrix_v(R(1, 3), R(4, 3)), RationalBlock::matrix_v(R(1, 2), R(1)),
          RationalBlock::matrix_v(R(2, 5), R(3, 5)), RationalBlock::matrix_v(R(1, 4), R(1, 3)),
          RationalBlock::matrix_v(R(3, 10), R(2))};
}

// c2 e^t/(c1 (1 - c1^2)) (sinh c1 t cosh t - c1 cosh c1 t sinh t) for f'' = (c1^2 + c2 Phi^2) f
RSeries scalar_f2_closed(const Rational& c1, const Rational& c2, int order) {
  const RSeries inner = sr::sinh(order, c1) * sr::cosh(order, 1) - sr::cosh(order, c1) * sr::sinh(order, 1) * c1;
  return sr::exp(order, 1) * inner * (c2 / (c1 * (1 - c1 * c1)));
}

RSeries odd_at_one(const BiSeries& b) {
  RSeries out(b.order());
  for (int k = 0; k <= b.order(); ++k) out[k] = b[k].odd.eval(Rational(1));
  return out;
}

RSeries minus_even_derivative_at_one(const BiSeries& b) {
  RSeries out(b.order());
  for (int k = 0; k <= b.order(); ++k) out[k] = -b[k].even.derivative().eval(Rational(1));
  return out;
}

// x, y or det v; the series primary of y is y itself, not y^2
double primary(const BlockMatrix& m, const BlockODE& b) {
  return b.kind == BlockKind::MatrixV ? m.determinant() : m(0, 0);
}

}  // namespace

TEST(PolyC, Ring) {
  const PolyC c = PolyC::c();
  const PolyC one_minus = PolyC(1) - c, one_plus = PolyC(1) + c;
  EXPECT_EQ(one_minus * one_plus, PolyC(std::vector<Rational>{1, 0, -1}));
  EXPECT_EQ((one_minus * one_plus).derivative(), PolyC(std::vector<Rational>{0, -2}));
  EXPECT_TRUE((c - c).is_zero());
  EXPECT_EQ((c * c).eval(R(1, 2)), R(1, 4));
  EXPECT_EQ(PolyC(std::vector<Rational>{3, 0, 0}).coefficients().size(), 1u);
}

TEST(PolyCS, SineSquaredReduces) {
  const PolyCS s = PolyCS::s();
  EXPECT_EQ(s * s, PolyCS(PolyC(std::vector<Rational>{1, 0, -1})));
  EXPECT_EQ(s * s * s, PolyCS(PolyC(), PolyC(std::vector<Rational>{1, 0, -1})));
}

TEST(Truncated, InverseAndShift) {
  const RSeries e = sr::exp(10, R(1)), em = sr::exp(10, R(-1));
  EXPECT_EQ(e.inverse(), em);
  EXPECT_EQ(e * em, RSeries::constant(10, R(1)));
  EXPECT_EQ(sr::sinhc(8, R(2))[2], R(4, 3));
  EXPECT_THROW(e.shift_down(1), Error);
}

TEST(Thirds, ExactCoefficients) {
  const auto r = thirds_t9();
  EXPECT_EQ(r.odd_coeffs[0], PolyC(1));
  EXPECT_EQ(r.odd_coeffs[1], PolyC(R(1, 9)));
  EXPECT_EQ(r.odd_coeffs[2], PolyC(R(2, 405)));
  const Rational den = Rational(4 * 7) * Rational(19683);
  EXPECT_EQ(r.odd_coeffs[3], PolyC(std::vector<Rational>{81 / den, 0, -27 / den, 0, 15 / den, 0, -1 / den}));
  EXPECT_EQ(r.odd_coeffs[3][6], R(-1, 551124));
  EXPECT_TRUE(r.sine_free);
  EXPECT_TRUE(r.even_coeffs_vanish);
  EXPECT_TRUE(r.phi0_matches);
  EXPECT_EQ(r.first_phi_dependent_order, 10);
}

TEST(Thirds, PhiTwoTermVanishes) {
  const std::vector<RationalBlock> blocks{thirds_x_block(), thirds_v_block()};
  EXPECT_TRUE(volume_combo(blocks).is_zero());
  EXPECT_EQ(volume_phi2_from_ode(blocks, 12), RSeries(12));
}

TEST(OdeSeries, PhiZeroPartIsSinh) {
  const auto os = ode_series(RationalBlock::scalar_x(R(1)), 12);
  EXPECT_EQ(os.parts.f0, sr::sinh(12, 1));
  EXPECT_EQ(os.parts.f2, RSeries(12));
  const auto ov = ode_series(RationalBlock::matrix_v(R(1, 4), R(1)), 12);
  EXPECT_EQ(ov.parts.f0, sr::sinh(12, R(1, 4)) * sr::sinh(12, R(3, 4)) * R(16, 3));
}

TEST(OdeSeries, FirstOrderPartVanishes) {
  for (const auto& set : {x_sets(), y_sets(), v_sets()})
    for (const auto& b : set) EXPECT_EQ(ode_series(b, 12).parts.f1, RSeries(12));
}

TEST(OdeSeries, OrderLimits) {
  try {
    ode_series(RationalBlock::scalar_x(R(1, 2)), 17);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderTooLarge);
  }
  EXPECT_THROW(volume_taylor({}, 17), Error);
  EXPECT_NO_THROW(ode_series(RationalBlock::matrix_v(R(1, 3), R(4, 3)), 16));
}

TEST(OdeSeries, ScalarPhiTwoMatchesClosedForm) {
  const int order = 12;
  for (const auto& b : x_sets()) {
    const auto os = ode_series(b, order);
    EXPECT_EQ(os.parts.f2, scalar_f2_closed(b.lambda_j, (1 - b.lambda_j) * b.lambda_j, order)) << to_string(b.lambda_j);
  }
  for (const auto& b : y_sets()) {
    const auto os = ode_series(b, order);
    EXPECT_EQ(os.parts.f2, scalar_f2_closed(R(1, 2), (1 - b.a2) / 4, order)) << to_string(b.a2);
  }
}

TEST(OdeSeries, MatrixFirstOrderOffDiagonal) {
  // v is stored conjugated by diag(1, b): the (0,1) entry carries b^2, the (1,0) entry none.
  // The (1,0) entry solves w'' = lambda_l'^2 w + b e^{(1 + lambda_l) t}, w(0) = w'(0) = 0; its
  // leading term is +b t^2/2, forced by the skew first-order coupling.
  const int order = 12;
  for (const auto& b : v_sets()) {
    const Rational l = b.lambda_l, lp = b.lambda_lp();
    const auto os = ode_series(b, order);
    const RSeries et = sr::exp(order, 1);
    const RSeries want01 = (sr::sinh(order, l) * lp - et * sr::sinh(order, lp) * l) * (b.b2 / (2 * l * lp));
    const RSeries want10 = (et * sr::sinh(order, l) * lp - sr::sinh(order, lp) * l) * (Rational(1) / (2 * l * lp));
    const RSeries forced = (sr::exp(order, 1 + l) * lp - sr::cosh(order, lp) * lp - sr::sinh(order, lp) * (1 + l)) *
                           (Rational(1) / (4 * l * lp));
    EXPECT_EQ(odd_at_one(os.entries[1]), want01) << to_string(l) << " " << to_string(b.b2);
    EXPECT_EQ(odd_at_one(os.entries[2]), want10) << to_string(l) << " " << to_string(b.b2);
    EXPECT_EQ(want10, forced);
    EXPECT_EQ(odd_at_one(os.entries[0]), RSeries(order));
    EXPECT_EQ(odd_at_one(os.entries[3]), RSeries(order));
  }
}

TEST(OdeSeries, MatrixPhiTwoDiagonal) {
  const int order = 12;
  for (const auto& b : v_sets()) {
    const Rational l = b.lambda_l, lp = b.lambda_lp();
    const auto os = ode_series(b, order);
    const RSeries et = sr::exp(order, 1);
    const Rational k = -(b.b2 - l * lp) / (l * lp);
    auto diag = [&](const Rational& m) {
      return et * (sr::cosh(order, 1) * sr::sinh(order, m) - sr::sinh(order, 1) * sr::cosh(order, m) * m) *
             (k / (1 + m));
    };
    EXPECT_EQ(minus_even_derivative_at_one(os.entries[0]), diag(l));
    EXPECT_EQ(minus_even_derivative_at_one(os.entries[3]), diag(lp));
  }
}

TEST(Coth, Canonical) {
  CothCombo a{{R(1), R(1, 2)}, {R(1, 3), R(1)}};
  a.add(R(1), R(-1, 2));
  EXPECT_EQ(a.terms().size(), 1u);
  EXPECT_EQ(a.coefficient(R(1, 3)), R(1));
  EXPECT_TRUE((a * R(0)).is_zero());
  EXPECT_THROW(a.add(R(0), R(1)), Error);
  EXPECT_TRUE(coth_decompose(a + a * R(-1)).zero);
  EXPECT_FALSE(coth_decompose(a).zero);
}

TEST(Coth, TrivialZeros) {
  EXPECT_TRUE(phi2_hat(RationalBlock::scalar_x(R(1))).is_zero());
  EXPECT_TRUE(phi2_hat(RationalBlock::scalar_y(R(1))).is_zero());
}

TEST(Coth, ThirdsCoefficients) {
  const CothCombo v = phi2_hat(thirds_v_block());
  EXPECT_EQ(v.coefficient(R(1)), R(-1, 4));
  EXPECT_EQ(v.coefficient(R(1, 3)), R(1, 12));
  EXPECT_EQ(v.coefficient(R(2, 3)), R(0));
  const CothCombo x = phi2_hat(thirds_x_block());
  EXPECT_EQ(x, (CothCombo{{R(1), R(1, 4)}, {R(1, 3), R(-1, 12)}}));
}

TEST(CrossEngine, RelativePhiTwoMatchesCothSeries) {
  const int order = 12;
  for (const auto& set : {x_sets(), y_sets(), v_sets()})
    for (const auto& b : set) {
      const auto os = ode_series(b, order + b.leading_power());
      EXPECT_EQ(relative_phi2(os), combo_series(phi2_hat(b), order)) << to_string(b.kind);
    }
}

TEST(CrossEngine, VolumeBothRoutes) {
  const std::vector<RationalBlock> blocks{RationalBlock::scalar_x(R(2, 5)), RationalBlock::scalar_y(R(1, 2)),
                                          RationalBlock::scalar_y(R(1, 2)), RationalBlock::matrix_v(R(2, 5), R(1))};
  const RSeries taylor = volume_taylor(blocks, 10);
  EXPECT_EQ(volume_phi2_from_ode(blocks, 10, false), taylor);
  EXPECT_EQ(volume_phi2_from_ode(blocks, 10, true), taylor);
  EXPECT_NE(taylor, RSeries(10));
}

TEST(CrossEngine, SeriesMatchesIntegrator) {
  const double t = 0.1, phi = 0.3;
  const double c = std::cos(phi), s = std::sin(phi);
  const std::pair<RationalBlock, BlockODE> cases[] = {
      {RationalBlock::scalar_x(R(1, 3)), BlockODE::scalar_x(1.0, 1.0 / 3)},
      {RationalBlock::scalar_y(R(1, 4)), BlockODE::scalar_y(1.0, 0.5)},
      {RationalBlock::matrix_v(R(1, 3), R(4, 3)), BlockODE::matrix_v(1.0, 1.0 / 3, std::sqrt(4.0 / 3))}};
  for (const auto& [rb, ob] : cases) {
    const double series_value = sr::evaluate(ode_series(rb, 16).primary, t, c, s);
    const double ode_value = primary(block_value(ob, phi, t, 4096), ob);
    EXPECT_NEAR(series_value, ode_value, 1e-9 * std::abs(ode_value)) << to_string(ob.kind);
  }
}

TEST(Sum0, DamekRicciHalfIdentity) {
  const auto alg = build_damek_ricci(1, 2, 1.0);
  const auto spec = spectral_decompose(alg);
  const auto blocks = rational_blocks(adapted_basis(alg, spec, default_z(spec)));
  const auto rep = sum0_constraints(blocks);
  EXPECT_TRUE(rep.all_vanish);
  ASSERT_EQ(rep.identities.size(), 1u);
  EXPECT_EQ(rep.identities[0].name, "half");
  EXPECT_EQ(rep.identities[0].lhs, R(2));
  EXPECT_EQ(rep.identities[0].rhs, R(2));
}

TEST(Sum0, DamekRicciTopFrequencyRedundant) {
  for (auto [dz, du] : solvharm::testing::kDamekRicciBuilds) {
    const auto alg = build_damek_ricci(dz, du, 1.0);
    const auto spec = spectral_decompose(alg);
    const auto rep = sum0_constraints(rational_blocks(adapted_basis(alg, spec, default_z(spec))));
    EXPECT_TRUE(rep.all_vanish);
    EXPECT_EQ(rep.total.coefficient(R(1)), R(0));
  }
}

TEST(Sum0, OnlyXBlocksViolate) {
  const std::vector<RationalBlock> blocks{RationalBlock::scalar_x(R(1, 2)), RationalBlock::scalar_x(R(2, 5))};
  const auto rep = sum0_constraints(blocks);
  EXPECT_FALSE(rep.all_vanish);
  for (const auto& b : blocks) {
    const Rational lj = b.lambda_j;
    bool found = false;
    for (const auto& con : rep.constraints)
      if (con.mu == lj) {
        found = true;
        EXPECT_EQ(con.coefficient, -lj * lj / (1 + lj));
        EXPECT_FALSE(con.vanishes);
      }
    EXPECT_TRUE(found);
  }
}

TEST(Sum0, PairingIdentity) {
  // one v block at 2/5 with 2 alpha n_alpha = b^2 for both partners would need b^2 = 4/5 and 6/5 at once
  const auto rep = sum0_constraints({RationalBlock::matrix_v(R(2, 5), R(4, 5))});
  ASSERT_EQ(rep.identities.size(), 2u);
  EXPECT_TRUE(rep.identities[0].holds);
  EXPECT_FALSE(rep.identities[1].holds);
  EXPECT_FALSE(rep.all_vanish);
}
