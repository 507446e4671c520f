// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace solvharm;
using solvharm::testing::load_json;
using solvharm::testing::load_sample;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Rational R(long long p, long long q = 1) { return Rational(p, q); }

const char* const kTestAlgebras[] = {
    "hyperbolic_plane.json",     "real_hyperbolic_4.json",       "damek_ricci_1_2.json",
    "damek_ricci_1_4.json",      "damek_ricci_2_4.json",         "damek_ricci_3_4.json",
    "damek_ricci_1_8.json",      "damek_ricci_3_4_rotated.json", "thirds.json",
    "violator_pairing.json",     "violator_root_span.json",      "violator_half_eigenvalue.json",
    "violator_ledger.json",      "band_positive_curvature.json"};

AdaptedBasis basis_of(const MetricSolvableAlgebra& alg) {
  const auto spec = spectral_decompose(alg);
  return adapted_basis(alg, spec, default_z(spec));
}

Outcome thirds_exact() {
  const auto t0 = Clock::now();
  const ThirdsResult r = thirds_t9();
  const double secs = seconds_since(t0);
  const Rational den = R(4 * 7) * R(19683);
  const PolyC want9(std::vector<Rational>{81 / den, 0, -27 / den, 0, 15 / den, 0, -1 / den});
  Outcome o;
  o.pass = r.odd_coeffs[0] == PolyC(1) && r.odd_coeffs[1] == PolyC(R(1, 9)) && r.odd_coeffs[2] == PolyC(R(2, 405)) &&
           r.odd_coeffs[3] == want9 && secs < 5.0;
  std::ostringstream os;
  os << "t^9 = [";
  const auto s = r.odd_coeffs[3].to_strings();
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? ", " : "") << s[i];
  os << "] in powers of cos(phi), " << secs << " s";
  o.detail = os.str();
  return o;
}

Outcome abelian_geodesic_oracle() {
  Outcome o;
  double worst = 0.0, slowest = 0.0;
  for (const char* name : kTestAlgebras) {
    const auto t0 = Clock::now();
    const auto alg = load_sample(name);
    const auto spec = spectral_decompose(alg);
    const auto basis = adapted_basis(alg, spec, default_z(spec));
    for (int i = 0; i <= 190; ++i) {
      const double t = 0.1 + i * 0.01;
      const double want = volume_density_closed_form(spec, t);
      worst = std::max(worst, std::abs(volume_density(basis, 0.0, t, 1024) / want - 1.0));
    }
    slowest = std::max(slowest, seconds_since(t0));
  }
  o.pass = worst < 1e-8 && slowest < 10.0;
  std::ostringstream os;
  os << std::size(kTestAlgebras) << " algebras, max rel err " << worst << ", slowest " << slowest << " s";
  o.detail = os.str();
  return o;
}

Outcome harmonicity_scan() {
  const auto t0 = Clock::now();
  Outcome o;
  double worst_dr = 0.0;
  for (auto [dz, du] : solvharm::testing::kDamekRicciBuilds) {
    const auto res = phi_independence_scan(basis_of(build_damek_ricci(dz, du, 1.0)), PhiScanGrid{});
    worst_dr = std::max(worst_dr, res.max_rel_dev);
  }
  const double thirds = phi_independence_scan(basis_of(load_sample("thirds.json")), PhiScanGrid{}).max_rel_dev;
  const double secs = seconds_since(t0);
  o.pass = worst_dr < 1e-7 && thirds > 1e-4 && secs < 60.0;
  std::ostringstream os;
  os << "Damek-Ricci max dev " << worst_dr << ", thirds dev " << thirds << ", " << secs << " s";
  o.detail = os.str();
  return o;
}

Outcome cross_engine() {
  const std::vector<RationalBlock> sets{
      RationalBlock::scalar_x(R(1, 3)),          RationalBlock::scalar_x(R(1, 2)),
      RationalBlock::scalar_x(R(2, 3)),          RationalBlock::scalar_x(R(1, 5)),
      RationalBlock::scalar_x(R(7, 10)),         RationalBlock::scalar_y(R(1)),
      RationalBlock::scalar_y(R(1, 2)),          RationalBlock::scalar_y(R(0)),
      RationalBlock::scalar_y(R(1, 4)),          RationalBlock::scalar_y(R(3, 7)),
      RationalBlock::matrix_v(R(1, 3), R(4, 3)), RationalBlock::matrix_v(R(1, 2), R(1)),
      RationalBlock::matrix_v(R(2, 5), R(3, 5)), RationalBlock::matrix_v(R(1, 4), R(1, 3)),
      RationalBlock::matrix_v(R(3, 10), R(2))};
  constexpr int order = 12;
  Outcome o;
  int agree = 0;
  for (const auto& b : sets) {
    const RSeries from_ode = relative_phi2(ode_series(b, order + b.leading_power()));
    if (from_ode == combo_series(phi2_hat(b), order) && from_ode.order() == order) ++agree;
  }
  o.pass = agree == static_cast<int>(sets.size());
  o.detail = std::to_string(agree) + "/" + std::to_string(sets.size()) + " parameter sets exact through t^12";
  return o;
}

Outcome ledger_battery() {
  Outcome o;
  double worst = 0.0;
  for (auto [dz, du] : solvharm::testing::kDamekRicciBuilds) {
    const auto l = ledger_check(build_damek_ricci(dz, du, 1.0));
    worst = std::max({worst, l.einstein_residual, l.ledger2_residual, l.einstein_tensor_residual,
                      l.ledger2_tensor_residual});
  }
  // lambda, n_{1/3}, n_{1/2}, n_{2/3}, n_lambda with n_{1/3} = 2 n_{2/3}
  struct Mix { double lambda; int n3, n2, n23, n1; };
  const Mix mixes[] = {{1.0, 2, 0, 1, 1}, {1.0, 4, 2, 2, 3}, {2.0, 0, 3, 0, 2}, {0.7, 6, 1, 3, 1}, {1.5, 2, 4, 1, 2}};
  double worst_trace = 0.0;
  for (const auto& m : mixes) {
    nlohmann::json entries = nlohmann::json::array();
    if (m.n3) entries.push_back({{"alpha", m.lambda / 3}, {"mult", m.n3}});
    if (m.n2) entries.push_back({{"alpha", m.lambda / 2}, {"mult", m.n2}});
    if (m.n23) entries.push_back({{"alpha", 2 * m.lambda / 3}, {"mult", m.n23}});
    entries.push_back({{"alpha", m.lambda}, {"mult", m.n1}});
    const auto alg = build_from_spec({{"kind", "spectral"}, {"entries", entries}});
    const CurvatureOracle curv(alg);
    const Eigen::MatrixXd ra = curv.jacobi_operator(Eigen::VectorXd::Unit(alg.dim(), 0));
    const double l4 = std::pow(m.lambda, 4);
    const double want = l4 * m.n1 + l4 / 16 * m.n2 + 2 * l4 / 9 * m.n23;
    worst_trace = std::max(worst_trace, std::abs((ra * ra).trace() - want));
  }
  o.pass = worst < 1e-10 && worst_trace < 1e-10;
  std::ostringstream os;
  os << "Damek-Ricci residual " << worst << ", trace identity residual " << worst_trace;
  o.detail = os.str();
  return o;
}

Outcome closed_form_vs_ode() {
  Outcome o;
  double worst = 0.0;
  for (double frac : {1.0 / 3, 0.5, 2.0 / 3, 1.0})
    for (double phi : {0.0, 0.5, 1.5}) {
      const auto sol = integrate_block(BlockODE::scalar_x(1.0, frac), phi, 2.0, 1024);
      for (std::size_t i = 1; i < sol.t.size(); ++i) {
        const double want = closed_form_x(frac, 1.0, phi, sol.t[i]);
        worst = std::max(worst, std::abs(sol.value[i](0, 0) - want) / std::abs(want));
      }
    }
  o.pass = worst < 1e-8;
  std::ostringstream os;
  os << "max rel err " << worst << " over 12 (lambda_j, phi) pairs, 1024 points each";
  o.detail = os.str();
  return o;
}

Outcome decision_table() {
  struct Row { const char* sample; Verdict verdict; const char* first; };
  const Row rows[] = {
      {"abelian.json", Verdict::Flat, ""},
      {"hyperbolic_plane.json", Verdict::RealHyperbolic, ""},
      {"real_hyperbolic_4.json", Verdict::RealHyperbolic, ""},
      {"damek_ricci_1_2.json", Verdict::DamekRicci, ""},
      {"damek_ricci_1_4.json", Verdict::DamekRicci, ""},
      {"damek_ricci_2_4.json", Verdict::DamekRicci, ""},
      {"damek_ricci_3_4.json", Verdict::DamekRicci, ""},
      {"damek_ricci_1_8.json", Verdict::DamekRicci, ""},
      {"damek_ricci_3_4_rotated.json", Verdict::DamekRicci, ""},
      {"violator_pairing.json", Verdict::NotHarmonic, "eigenvalue_pairing"},
      {"violator_root_span.json", Verdict::NotHarmonic, "root_span"},
      {"violator_half_eigenvalue.json", Verdict::NotHarmonic, "half_eigenvalue"},
      {"thirds.json", Verdict::NotHarmonic, "thirds_exclusion"},
      {"violator_ledger.json", Verdict::NotHarmonic, "ledger"},
  };
  Outcome o;
  int ok = 0;
  std::string bad;
  for (const auto& row : rows) {
    const auto rep = classify(load_sample(row.sample));
    const bool match = rep.verdict == row.verdict && rep.first_failure == row.first;
    if (match) ++ok;
    else bad += std::string(" ") + row.sample + "->" + to_string(rep.verdict) + "/" + rep.first_failure;
  }
  o.pass = ok == static_cast<int>(std::size(rows));
  o.detail = std::to_string(ok) + "/" + std::to_string(std::size(rows)) + " verdicts match" + bad;
  return o;
}

Outcome convergence_order() {
  const BlockODE blocks[] = {BlockODE::scalar_x(1.0, 1.0 / 3), BlockODE::scalar_y(1.0, 0.5),
                             BlockODE::matrix_v(1.0, 1.0 / 3, std::sqrt(4.0 / 3))};
  Outcome o;
  std::ostringstream os;
  os << "orders";
  for (const auto& b : blocks) {
    const double phi = 0.5;
    const BlockMatrix a = block_value(b, phi, 1.0, 64), m = block_value(b, phi, 1.0, 128),
                      c = block_value(b, phi, 1.0, 256);
    const double p = std::log2((a - m).norm() / (m - c).norm());
    o.pass = o.pass && p >= 3.8 && p <= 4.2;
    os << ' ' << to_string(b.kind) << '=' << p;
  }
  o.detail = os.str();
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"exact t^9 coefficients of the thirds instance", thirds_exact},
      {"V(t,0) along the abelian geodesic equals the sinh product", abelian_geodesic_oracle},
      {"phi-independence scan separates Damek-Ricci from thirds", harmonicity_scan},
      {"phi^2 part: ODE series equals coth-combination series", cross_engine},
      {"ledger residuals and Tr R_A^2 identity", ledger_battery},
      {"closed-form x block agrees with RK4", closed_form_vs_ode},
      {"classifier decision table", decision_table},
      {"RK4 convergence order", convergence_order},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
