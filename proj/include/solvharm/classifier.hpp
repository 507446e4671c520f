#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "solvharm/curvature.hpp"
#include "solvharm/density.hpp"
#include "solvharm/j_family.hpp"
#include "solvharm/series/lab.hpp"
#include "solvharm/spectral.hpp"

namespace solvharm {

enum class CheckStatus { Pass, Fail, Inapplicable };
enum class Verdict { Flat, RealHyperbolic, DamekRicci, NotHarmonic, Inconclusive };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inapplicable: return "inapplicable";
  }
  return "unknown";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Flat: return "Flat";
    case Verdict::RealHyperbolic: return "RealHyperbolic";
    case Verdict::DamekRicci: return "DamekRicci";
    case Verdict::NotHarmonic: return "NotHarmonic";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

/// Process exit code for a verdict: 0 for the harmonic outcomes.
inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Flat:
    case Verdict::RealHyperbolic:
    case Verdict::DamekRicci: return 0;
    case Verdict::NotHarmonic: return 2;
    case Verdict::Inconclusive: return 3;
  }
  return 3;
}

struct CheckResult {
  CheckResult() = default;
  explicit CheckResult(std::string n) : name(std::move(n)) {}

  std::string name;
  CheckStatus status = CheckStatus::Inapplicable;
  nlohmann::json witness = nlohmann::json::object();
  std::string note;
};

struct ConstraintReport {
  std::vector<CheckResult> checks;
  Verdict verdict = Verdict::Inconclusive;
  std::string first_failure;  // empty unless NotHarmonic
  std::string note;
  double lambda = 0.0;
  std::vector<std::pair<double, int>> spectrum;  // (alpha, multiplicity)

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["verdict"] = to_string(verdict);
    j["exit_code"] = exit_code(verdict);
    j["first_failure"] = first_failure.empty() ? nlohmann::json(nullptr) : nlohmann::json(first_failure);
    if (!note.empty()) j["note"] = note;
    j["lambda"] = lambda;
    j["spectrum"] = nlohmann::json::array();
    for (const auto& [a, m] : spectrum) j["spectrum"].push_back({{"alpha", a}, {"multiplicity", m}});
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json cj{{"name", c.name}, {"status", to_string(c.status)}, {"witness", c.witness}};
      if (!c.note.empty()) cj["note"] = c.note;
      j["checks"].push_back(std::move(cj));
    }
    return j;
  }
};

/// Check names in report order.
inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "flatness",         "nonpositivity", "eigenvalue_pairing", "band",   "root_span",
      "half_eigenvalue",  "thirds_exclusion", "phi_independence", "ledger"};
  return names;
}

struct ClassifierOptions {
  std::uint64_t seed = kScanSeed;
  int scan_planes = kScanPlanes;
  PhiScanGrid grid{};
  int steps = kDefaultSteps;
  double phi_tol = 1e-7;
  bool parallel = false;
};

namespace detail {

inline constexpr double kFlatTol = 1e-10;
inline constexpr double kDataTol = 1e-9;

/// Everything the checks share, computed once.
struct ClassifierContext {
  const MetricSolvableAlgebra& alg;
  const CurvatureOracle& curv;
  const ScanResult& scan;
  const SpectralData& spec;
  const JOperatorFamily& fam;
  const ClassifierOptions& opt;
  std::vector<std::optional<Rational>> ratios;  // alpha/lambda when rational
};

inline std::string rat_or_double(const std::optional<Rational>& r, double x) {
  return r ? to_string(*r) : std::to_string(x);
}

inline nlohmann::json block_summary(const AdaptedBasis& b) {
  nlohmann::json j;
  j["x"] = nlohmann::json::array();
  for (const auto& x : b.x) j["x"].push_back(x.lambda_j);
  j["y"] = nlohmann::json::array();
  for (const auto& y : b.y) j["y"].push_back(y.a);
  j["v"] = nlohmann::json::array();
  for (const auto& v : b.v) j["v"].push_back({{"lambda_l", v.lambda_l}, {"b", v.b}});
  return j;
}

inline bool only_top(const SpectralData& spec) { return spec.entries.size() == 1; }

inline CheckResult check_pairing(const ClassifierContext& cx) {
  CheckResult r{"eigenvalue_pairing"};
  if (only_top(cx.spec)) {
    r.note = "vacuous: no eigenvalue other than lambda";
    return r;
  }
  const double lam = cx.spec.lambda;
  r.status = CheckStatus::Pass;
  for (std::size_t zi = 0; zi < cx.fam.ops.size(); ++zi) {
    const AdaptedBasis& basis = cx.fam.ops[zi].blocks;
    std::optional<std::vector<RationalBlock>> exact;
    try {
      exact = rational_blocks(basis);
    } catch (const Error&) {
    }
    if (exact) {
      for (const auto& id : sum0_constraints(*exact).identities) {
        if (id.holds) continue;
        r.status = CheckStatus::Fail;
        r.witness = {{"z_index", zi}, {"alpha_over_lambda", to_string(id.alpha)}, {"identity", id.name},
                     {"lhs", to_string(id.lhs)}, {"rhs", to_string(id.rhs)}, {"exact", true},
                     {"blocks", block_summary(basis)}};
        return r;
      }
      continue;
    }
    for (const auto& e : cx.spec.entries) {
      if (cx.spec.same(e.alpha, lam)) continue;
      double lhs = 0.0, rhs = 0.0;
      if (cx.spec.same(e.alpha, 0.5 * lam)) {
        lhs = lam * lam * e.multiplicity;
        for (const auto& y : basis.y) rhs += 2.0 * y.a * y.a;
      } else {
        lhs = 2.0 * e.alpha * lam * e.multiplicity;
        for (const auto& v : basis.v)
          if (cx.spec.same(v.lambda_l, e.alpha) || cx.spec.same(v.lambda_lp, e.alpha)) rhs += v.b * v.b;
      }
      if (std::abs(lhs - rhs) > kDataTol * std::max(1.0, lhs)) {
        r.status = CheckStatus::Fail;
        r.witness = {{"z_index", zi}, {"alpha", e.alpha}, {"lhs", lhs}, {"rhs", rhs}, {"exact", false},
                     {"blocks", block_summary(basis)}};
        return r;
      }
    }
  }
  return r;
}

inline CheckResult check_band(const ClassifierContext& cx) {
  CheckResult r{"band"};
  r.status = CheckStatus::Pass;
  const double lam = cx.spec.lambda;
  for (std::size_t i = 0; i < cx.spec.entries.size(); ++i) {
    const double ratio = cx.spec.entries[i].alpha / lam;
    bool inside;
    if (const auto& q = cx.ratios[i]) {
      inside = *q == 1 || (*q >= Rational(1, 3) && *q <= Rational(2, 3));
    } else {
      inside = std::abs(ratio - 1.0) <= kDataTol || (ratio >= 1.0 / 3.0 - kDataTol && ratio <= 2.0 / 3.0 + kDataTol);
    }
    if (!inside) {
      r.status = CheckStatus::Fail;
      r.witness = {{"alpha", cx.spec.entries[i].alpha}, {"alpha_over_lambda", rat_or_double(cx.ratios[i], ratio)}};
      return r;
    }
  }
  return r;
}

/// Rank of a rational matrix by fraction-exact elimination.
inline int rational_rank(std::vector<std::vector<Rational>> m) {
  int rank = 0;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (m[i][c] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    for (int i = 0; i < rows; ++i) {
      if (i == rank || m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[rank][c];
      for (int k = c; k < cols; ++k) m[i][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// (n_i (c - alpha_i))_i must lie in the span of e_i + e_j - e_k over
/// alpha_i + alpha_j = alpha_k, where c = Tr D^2 / Tr D. Any alpha strictly
/// between lambda/3 and lambda/2 is rejected outright.
inline CheckResult check_root_span(const ClassifierContext& cx) {
  CheckResult r{"root_span"};
  r.status = CheckStatus::Pass;
  const auto& es = cx.spec.entries;
  const int nn = static_cast<int>(es.size());
  const double lam = cx.spec.lambda;
  const bool exact = std::all_of(cx.ratios.begin(), cx.ratios.end(), [](const auto& q) { return q.has_value(); });

  auto corollary = [&]() {
    for (int i = 0; i < nn; ++i) {
      const double ratio = es[i].alpha / lam;
      const bool between = exact ? (*cx.ratios[i] > Rational(1, 3) && *cx.ratios[i] < Rational(1, 2))
                                 : (ratio > 1.0 / 3.0 + kDataTol && ratio < 0.5 - kDataTol);
      if (between) {
        r.status = CheckStatus::Fail;
        r.witness["reason"] = "eigenvalue strictly between lambda/3 and lambda/2";
        r.witness["alpha_over_lambda"] = rat_or_double(cx.ratios[i], ratio);
        return true;
      }
    }
    return false;
  };

  std::vector<std::array<int, 3>> rel;
  for (int i = 0; i < nn; ++i)
    for (int j = i; j < nn; ++j)
      for (int k = 0; k < nn; ++k) {
        const bool hit = exact ? *cx.ratios[i] + *cx.ratios[j] == *cx.ratios[k]
                               : cx.spec.same(es[i].alpha + es[j].alpha, es[k].alpha);
        if (hit) rel.push_back({i, j, k});
      }
  nlohmann::json relations = nlohmann::json::array();
  for (const auto& t : rel) relations.push_back(t);

  if (exact) {
    Rational tr = 0, tr2 = 0;
    for (int i = 0; i < nn; ++i) {
      tr += *cx.ratios[i] * es[i].multiplicity;
      tr2 += *cx.ratios[i] * *cx.ratios[i] * es[i].multiplicity;
    }
    const Rational c = tr2 / tr;
    std::vector<Rational> w(nn);
    for (int i = 0; i < nn; ++i) w[i] = Rational(es[i].multiplicity) * (c - *cx.ratios[i]);
    std::vector<std::vector<Rational>> f;
    for (const auto& t : rel) {
      std::vector<Rational> row(nn, Rational(0));
      row[t[0]] += 1;
      row[t[1]] += 1;
      row[t[2]] -= 1;
      f.push_back(row);
    }
    const int base = rational_rank(f);
    auto aug = f;
    aug.push_back(w);
    const bool member = rational_rank(aug) == base;
    nlohmann::json wj = nlohmann::json::array();
    for (const auto& x : w) wj.push_back(to_string(x));
    r.witness = {{"c_over_lambda", to_string(c)}, {"vector", wj}, {"relations", relations}, {"exact", true}};
    if (!member) {
      r.status = CheckStatus::Fail;
      r.witness["reason"] = "vector outside the span";
    } else {
      corollary();
    }
    return r;
  }

  double tr = 0.0, tr2 = 0.0;
  for (const auto& e : es) {
    tr += e.alpha * e.multiplicity;
    tr2 += e.alpha * e.alpha * e.multiplicity;
  }
  const double c = tr2 / tr;
  Eigen::VectorXd w(nn);
  for (int i = 0; i < nn; ++i) w[i] = es[i].multiplicity * (c - es[i].alpha);
  double residual = w.norm();
  if (!rel.empty()) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(nn, static_cast<Eigen::Index>(rel.size()));
    for (std::size_t s = 0; s < rel.size(); ++s) {
      f(rel[s][0], s) += 1.0;
      f(rel[s][1], s) += 1.0;
      f(rel[s][2], s) -= 1.0;
    }
    const Eigen::VectorXd coef = f.colPivHouseholderQr().solve(w);
    residual = (f * coef - w).norm();
  }
  r.witness = {{"c", c}, {"residual", residual}, {"relations", relations}, {"exact", false}};
  if (residual >= kDataTol * std::max(1.0, w.norm())) {
    r.status = CheckStatus::Fail;
    r.witness["reason"] = "vector outside the span";
  } else {
    corollary();
  }
  return r;
}

/// Trace identity Tr R_Z^2 = Tr R_A^2 on the canonical basis of n_lambda,
/// J_Z J_Z^t = lambda^2 on n_{lambda/2}, and lambda/2 excluding every
/// other eigenvalue below lambda.
inline CheckResult check_half_eigenvalue(const ClassifierContext& cx) {
  CheckResult r{"half_eigenvalue"};
  r.status = CheckStatus::Pass;
  const int n = cx.alg.dim();
  const double lam = cx.spec.lambda;
  const Eigen::MatrixXd ra = cx.curv.jacobi_operator(Eigen::VectorXd::Unit(n, 0));
  const double tra2 = (ra * ra).trace();
  for (std::size_t zi = 0; zi < cx.fam.ops.size(); ++zi) {
    const Eigen::MatrixXd rz = cx.curv.jacobi_operator(cx.fam.ops[zi].z);
    const double trz2 = (rz * rz).trace();
    if (std::abs(trz2 - tra2) > kDataTol * std::max(1.0, tra2)) {
      r.status = CheckStatus::Fail;
      r.witness = {{"part", "trace"}, {"z_index", zi}, {"tr_rz2", trz2}, {"tr_ra2", tra2}};
      return r;
    }
  }
  const Eigenspace* half = cx.spec.find(0.5 * lam);
  if (!half) {
    r.note = "lambda/2 is not an eigenvalue";
    return r;
  }
  for (std::size_t zi = 0; zi < cx.fam.ops.size(); ++zi) {
    const Eigen::MatrixXd& j = cx.fam.ops[zi].matrix;
    const Eigen::MatrixXd m = half->basis.transpose() * j * j.transpose() * half->basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const Eigen::VectorXd ev = es.eigenvalues();
    if ((ev.array() - lam * lam).abs().maxCoeff() > kDataTol * lam * lam) {
      r.status = CheckStatus::Fail;
      std::vector<double> evs(ev.data(), ev.data() + ev.size());
      r.witness = {{"part", "clifford"}, {"z_index", zi}, {"eigenvalues", evs}, {"expected", lam * lam}};
      return r;
    }
  }
  if (cx.spec.entries.size() != 2) {
    r.status = CheckStatus::Fail;
    std::vector<double> alphas;
    for (const auto& e : cx.spec.entries) alphas.push_back(e.alpha);
    r.witness = {{"part", "exclusion"}, {"alphas", alphas}};
  }
  return r;
}

inline bool is_thirds(const ClassifierContext& cx) {
  if (cx.ratios.size() != 3) return false;
  for (const auto& q : cx.ratios)
    if (!q) return false;
  return *cx.ratios[0] == Rational(1, 3) && *cx.ratios[1] == Rational(2, 3) && *cx.ratios[2] == 1;
}

/// Delta = {lambda/3, 2 lambda/3, lambda}: the exact t^9 coefficient of
/// x det v depends on cos(phi), so V(t, phi) does too.
inline CheckResult check_thirds(const ClassifierContext& cx) {
  CheckResult r{"thirds_exclusion"};
  if (!is_thirds(cx)) {
    r.note = "spectrum is not {lambda/3, 2 lambda/3, lambda}";
    return r;
  }
  const int n_top = cx.spec.entries[2].multiplicity;
  const int n_23 = cx.spec.entries[1].multiplicity;
  const ThirdsResult t = thirds_t9(n_top, n_23);
  const PolyC& t9 = t.odd_coeffs[3];
  r.status = t9.is_constant() ? CheckStatus::Pass : CheckStatus::Fail;
  r.witness = {{"t9_coefficients_in_c", t9.to_strings()},
               {"first_phi_dependent_order", t.first_phi_dependent_order},
               {"n_lambda", n_top},
               {"n_two_thirds", n_23}};
  return r;
}

inline CheckResult check_phi(const ClassifierContext& cx) {
  CheckResult r{"phi_independence"};
  const AdaptedBasis& basis = cx.fam.ops.front().blocks;
  const PhiScanResult s = phi_independence_scan(basis, cx.opt.grid, cx.opt.steps, cx.opt.parallel);
  r.status = s.max_rel_dev < cx.opt.phi_tol ? CheckStatus::Pass : CheckStatus::Fail;
  r.witness = {{"max_rel_dev", s.max_rel_dev}, {"t", s.t_arg}, {"phi", s.phi_arg}, {"tolerance", cx.opt.phi_tol}};
  return r;
}

inline CheckResult check_ledger(const ClassifierContext& cx) {
  CheckResult r{"ledger"};
  const LedgerResult l = ledger_check(cx.curv);
  const double tol_c = kDataTol * std::max(1.0, std::abs(l.c));
  const double tol_h = kDataTol * std::max(1.0, std::abs(l.h));
  const bool ok = l.einstein_residual < tol_c && l.einstein_tensor_residual < tol_c && l.ledger2_residual < tol_h &&
                  l.ledger2_tensor_residual < tol_h;
  r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  r.witness = {{"tr_ra", l.c},
               {"tr_ra2", l.h},
               {"einstein_residual", l.einstein_residual},
               {"einstein_tensor_residual", l.einstein_tensor_residual},
               {"ledger2_residual", l.ledger2_residual},
               {"ledger2_tensor_residual", l.ledger2_tensor_residual}};
  return r;
}

inline void skip_rest(ConstraintReport& rep, std::size_t from, const std::string& why) {
  const auto& names = check_names();
  for (std::size_t i = from; i < names.size(); ++i) {
    CheckResult c{names[i]};
    c.note = why;
    rep.checks.push_back(std::move(c));
  }
}

}  // namespace detail

/// Runs the battery in order. Every check after the curvature gate runs
/// (sequentially or concurrently) so the report is complete; the verdict
/// cites the first failure in order.
inline ConstraintReport classify(const MetricSolvableAlgebra& alg, const ClassifierOptions& opt = {}) {
  ConstraintReport rep;
  const CurvatureOracle curv(alg);
  const ScanResult scan = nonpositivity_scan(curv, opt.seed, opt.scan_planes);
  const double scale = std::max(1.0, alg.max_abs_constant() * alg.max_abs_constant());

  CheckResult flat{"flatness"};
  const double worst = std::max(std::abs(scan.max_sectional), std::abs(scan.min_sectional));
  flat.status = worst <= detail::kFlatTol * scale ? CheckStatus::Pass : CheckStatus::Fail;
  flat.witness = {{"max_abs_sectional", worst}, {"planes", scan.planes}};
  flat.note = "pass means every sampled sectional curvature vanishes";
  rep.checks.push_back(flat);
  if (flat.status == CheckStatus::Pass) {
    rep.verdict = Verdict::Flat;
    detail::skip_rest(rep, 1, "flat");
    return rep;
  }

  CheckResult np{"nonpositivity"};
  np.status = scan.max_sectional <= detail::kFlatTol * scale ? CheckStatus::Pass : CheckStatus::Fail;
  np.witness = {{"max_sectional", scan.max_sectional},
                {"min_sectional", scan.min_sectional},
                {"seed", opt.seed},
                {"planes", scan.planes}};
  if (np.status == CheckStatus::Fail) {
    std::vector<double> x(scan.max_x.data(), scan.max_x.data() + scan.max_x.size());
    std::vector<double> y(scan.max_y.data(), scan.max_y.data() + scan.max_y.size());
    np.witness["plane"] = {x, y};
  }
  rep.checks.push_back(np);
  if (np.status == CheckStatus::Fail) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "NonpositivityFail: the battery presumes nonpositive curvature";
    detail::skip_rest(rep, 2, "curvature is not nonpositive");
    return rep;
  }

  std::optional<SpectralData> spec;
  std::optional<JOperatorFamily> fam;
  try {
    spec = spectral_decompose(alg);
    fam = j_family(alg, *spec);
  } catch (const Error& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = std::string(to_string(e.kind())) + ": " + e.what();
    detail::skip_rest(rep, 2, "structure analysis failed");
    return rep;
  }
  rep.lambda = spec->lambda;
  for (const auto& e : spec->entries) rep.spectrum.emplace_back(e.alpha, e.multiplicity);

  detail::ClassifierContext cx{alg, curv, scan, *spec, *fam, opt, {}};
  for (const auto& e : spec->entries) cx.ratios.push_back(rationalize(e.alpha / spec->lambda, kRationalMaxDen, 1e-9));

  using CheckFn = CheckResult (*)(const detail::ClassifierContext&);
  const std::vector<CheckFn> battery{detail::check_pairing, detail::check_band,  detail::check_root_span,
                                     detail::check_half_eigenvalue, detail::check_thirds, detail::check_phi,
                                     detail::check_ledger};
  auto guarded = [&cx](CheckFn fn, const std::string& name) {
    try {
      return fn(cx);
    } catch (const Error& e) {
      CheckResult c{name};
      c.note = std::string("error: ") + to_string(e.kind()) + ": " + e.what();
      return c;
    }
  };
  const auto& names = check_names();
  if (opt.parallel) {
    std::vector<std::future<CheckResult>> futs;
    for (std::size_t i = 0; i < battery.size(); ++i)
      futs.push_back(std::async(std::launch::async, guarded, battery[i], names[i + 2]));
    for (auto& f : futs) rep.checks.push_back(f.get());
  } else {
    for (std::size_t i = 0; i < battery.size(); ++i) rep.checks.push_back(guarded(battery[i], names[i + 2]));
  }

  // flatness and nonpositivity are gates, not constraints
  for (std::size_t i = 2; i < rep.checks.size(); ++i) {
    const CheckResult& c = rep.checks[i];
    if (c.status == CheckStatus::Fail) {
      rep.verdict = Verdict::NotHarmonic;
      rep.first_failure = c.name;
      return rep;
    }
  }
  for (const auto& c : rep.checks)
    if (c.note.rfind("error: ", 0) == 0) {
      rep.verdict = Verdict::Inconclusive;
      rep.note = c.name + " could not run";
      return rep;
    }

  const bool constant_curvature = scan.max_sectional - scan.min_sectional <= detail::kFlatTol * scale;
  const bool top_only = detail::only_top(*spec);
  const bool half_top = spec->entries.size() == 2 && cx.ratios[0] && *cx.ratios[0] == Rational(1, 2);
  if (top_only && constant_curvature) {
    rep.verdict = Verdict::RealHyperbolic;
  } else if (half_top) {
    rep.verdict = Verdict::DamekRicci;
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "battery passed without a structural match";
  }
  return rep;
}

}  // namespace solvharm
