// solvharm: command-line front end for the rank-one solvmanifold toolkit.

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/sha.h>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "solvharm/solvharm.hpp"

namespace {

using nlohmann::json;
using namespace solvharm;

constexpr int kExitUsage = 64;
constexpr int kExitInput = 65;
constexpr int kExitCompute = 70;

/// Input could not be read or does not describe a valid algebra.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A flag value the library rejected.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Input {
  std::string path;
  std::string bytes;
  MetricSolvableAlgebra alg;
};

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  std::ostringstream os;
  for (unsigned char c : digest) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(c);
  return os.str();
}

Input load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  Input input;
  input.path = path;
  input.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(input.bytes);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": malformed JSON: " + e.what());
  }
  try {
    input.alg = build_from_spec(doc);
  } catch (const Error& e) {
    throw InputError(path + ": " + to_string(e.kind()) + ": " + e.what());
  }
  return input;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_json(m.row(r).transpose()));
  return rows;
}

json strings(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(to_string(r));
  return a;
}

json series_json(const RSeries& s) { return strings(s.coefficients()); }

json polycs_json(const PolyCS& p) { return {{"even", p.even.to_strings()}, {"odd", p.odd.to_strings()}}; }

json combo_json(const CothCombo& c) {
  json o = json::object();
  for (const auto& [mu, k] : c.terms()) o[to_string(mu)] = to_string(k);
  return o;
}

json spectrum_json(const SpectralData& spec) {
  json a = json::array();
  for (const auto& e : spec.entries) a.push_back({{"alpha", e.alpha}, {"multiplicity", e.multiplicity}});
  return a;
}

/// Primary output goes to the file (plus a manifest) or to stdout.
struct Output {
  std::string path;
  std::string subcommand;
  json params = json::object();
  std::uint64_t seed = kScanSeed;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const Input& input, const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest{{"tool", "solvharm"},
                  {"version", SOLVHARM_VERSION},
                  {"subcommand", subcommand},
                  {"input", input.path},
                  {"input_sha256", sha256_hex(input.bytes)},
                  {"parameters", params},
                  {"seed", seed},
                  {"wall_time_s", wall}};
    std::ofstream mf(path + ".manifest.json", std::ios::binary);
    if (!mf) throw std::runtime_error("cannot write " + path + ".manifest.json");
    mf << manifest.dump(2) << "\n";
  }
};

int run_build(const Input& in, const Output& out) {
  const auto& alg = in.alg;
  json j;
  j["dim"] = alg.dim();
  j["nilpotency_step"] = alg.nilpotency_step();
  json brackets = json::array();
  for (int i = 0; i < alg.dim(); ++i)
    for (int k = i + 1; k < alg.dim(); ++k)
      for (int l = 0; l < alg.dim(); ++l)
        if (alg.constant(i, k, l) != 0.0) brackets.push_back({i, k, l, alg.constant(i, k, l)});
  j["brackets"] = brackets;
  if (!alg.is_abelian()) {
    const SpectralData spec = spectral_decompose(alg);
    j["lambda"] = spec.lambda;
    j["spectrum"] = spectrum_json(spec);
    const AdaptedBasis basis = adapted_basis(alg, spec, default_z(spec));
    j["z"] = vec_json(basis.z);
    j["blocks"] = detail::block_summary(basis);
  }
  out.write(in, j.dump(2) + "\n");
  return 0;
}

int run_curvature(const Input& in, const Output& out, bool report, int planes) {
  const CurvatureOracle curv(in.alg);
  const LedgerResult led = ledger_check(curv);
  const ScanResult scan = nonpositivity_scan(curv, out.seed, planes);
  json j;
  j["einstein_constant"] = led.c;
  j["tr_ra2"] = led.h;
  j["ledger"] = {{"einstein_residual", led.einstein_residual},
                 {"einstein_tensor_residual", led.einstein_tensor_residual},
                 {"ledger2_residual", led.ledger2_residual},
                 {"ledger2_tensor_residual", led.ledger2_tensor_residual}};
  j["scan"] = {{"seed", out.seed},
               {"planes", scan.planes},
               {"max_sectional", scan.max_sectional},
               {"min_sectional", scan.min_sectional}};
  if (report) {
    j["scan"]["max_plane"] = {vec_json(scan.max_x), vec_json(scan.max_y)};
    j["scan"]["min_plane"] = {vec_json(scan.min_x), vec_json(scan.min_y)};
    j["ricci"] = mat_json(curv.ricci());
    const ConnectionTable conn(in.alg);
    j["connection"] = {{"compatibility_residual", conn.compatibility_residual()},
                       {"torsion_residual", conn.torsion_residual(in.alg)}};
  }
  out.write(in, j.dump(2) + "\n");
  return 0;
}

int run_geodesic(const Input& in, const Output& out, double phi, double tmax, int samples) {
  if (samples < 2) throw UsageError("--samples must be at least 2");
  if (!(tmax > 0.0)) throw UsageError("--tmax must be positive");
  const SpectralData spec = spectral_decompose(in.alg);
  std::ostringstream os;
  os << "t,q,Phi\n" << std::setprecision(17);
  for (int i = 0; i < samples; ++i) {
    const double t = tmax * i / (samples - 1);
    const GeodesicState st = geodesic_state(spec.lambda, phi, t);
    os << t << ',' << st.q << ',' << st.Phi << '\n';
  }
  out.write(in, os.str());
  return 0;
}

// Either the full form t0,t1,nt,phi0,phi1,nphi or the shorthand NTxNPHI,
// which takes t0, t1 from their own flags and phi over [0, pi).
PhiScanGrid parse_grid(const std::string& text, double t0, double t1) {
  PhiScanGrid g;
  g.t0 = t0;
  g.t1 = t1;
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  };
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  };
  try {
    if (text.find(',') != std::string::npos) {
      std::vector<std::string> f;
      std::stringstream ss(text);
      for (std::string item; std::getline(ss, item, ',');) f.push_back(item);
      if (f.size() != 6) throw std::invalid_argument(text);
      g.t0 = to_double(f[0]);
      g.t1 = to_double(f[1]);
      g.nt = to_int(f[2]);
      g.phi0 = to_double(f[3]);
      g.phi1 = to_double(f[4]);
      g.nphi = to_int(f[5]);
    } else {
      const auto x = text.find('x');
      if (x == std::string::npos) throw std::invalid_argument(text);
      g.nt = to_int(text.substr(0, x));
      g.nphi = to_int(text.substr(x + 1));
    }
  } catch (const std::exception&) {
    throw UsageError("--grid expects t0,t1,nt,phi0,phi1,nphi or NTxNPHI, got '" + text + "'");
  }
  if (g.nt < 1 || g.nphi < 1) throw UsageError("--grid sizes must be positive");
  if (!(g.t1 > g.t0) || g.t0 < 0) throw UsageError("--grid needs 0 <= t0 < t1");
  return g;
}

int run_density(const Input& in, const Output& out, const PhiScanGrid& grid, int steps, const std::string& format,
                bool parallel) {
  const SpectralData spec = spectral_decompose(in.alg);
  const AdaptedBasis basis = adapted_basis(in.alg, spec, default_z(spec));
  const auto samples = density_profile(basis, grid, steps, parallel);
  if (format == "csv") {
    std::ostringstream os;
    os << "t,phi,V,Vratio\n" << std::setprecision(17);
    for (const auto& s : samples) os << s.t << ',' << s.phi << ',' << s.v << ',' << s.ratio << '\n';
    out.write(in, os.str());
    return 0;
  }
  json j;
  j["lambda"] = spec.lambda;
  j["steps"] = steps;
  j["grid"] = {{"t0", grid.t0}, {"t1", grid.t1}, {"nt", grid.nt}, {"phi0", grid.phi0}, {"phi1", grid.phi1},
               {"nphi", grid.nphi}};
  double worst = 0.0;
  json rows = json::array();
  for (const auto& s : samples) {
    rows.push_back({{"t", s.t}, {"phi", s.phi}, {"v", s.v}, {"ratio", s.ratio}});
    worst = std::max(worst, std::abs(s.ratio - 1.0));
  }
  j["max_rel_dev"] = worst;
  j["samples"] = rows;
  out.write(in, j.dump(2) + "\n");
  return 0;
}

int run_series(const Input& in, const Output& out, int order) {
  if (order > kMaxSeriesOrder || order < 2)
    throw UsageError("--order must lie in [2, " + std::to_string(kMaxSeriesOrder) + "]");
  const SpectralData spec = spectral_decompose(in.alg);
  const AdaptedBasis basis = adapted_basis(in.alg, spec, default_z(spec));
  const auto blocks = rational_blocks(basis);
  json j;
  j["order"] = order;
  j["lambda"] = spec.lambda;
  j["lambda_normalized"] = true;
  json bl = json::array();
  for (const auto& b : blocks) {
    const OdeSeries os = ode_series(b, order);
    json e{{"kind", to_string(b.kind)}};
    switch (b.kind) {
      case BlockKind::ScalarX: e["lambda_j"] = to_string(b.lambda_j); break;
      case BlockKind::ScalarY: e["a2"] = to_string(b.a2); break;
      case BlockKind::MatrixV:
        e["lambda_l"] = to_string(b.lambda_l);
        e["b2"] = to_string(b.b2);
        break;
    }
    e["phi2_hat"] = combo_json(phi2_hat(b));
    json prim = json::array();
    for (int k = 0; k <= os.order; ++k) prim.push_back(polycs_json(os.primary[k]));
    e["primary"] = prim;
    e["phi0"] = series_json(os.parts.f0);
    e["phi2"] = series_json(os.parts.f2);
    e["relative_phi2"] = series_json(relative_phi2(os));
    bl.push_back(std::move(e));
  }
  j["blocks"] = bl;

  const Sum0Report rep = sum0_constraints(blocks);
  json cons = json::array();
  for (const auto& c : rep.constraints) {
    json terms = json::array();
    for (const auto& [idx, k] : c.terms) terms.push_back({{"block", idx}, {"coefficient", to_string(k)}});
    cons.push_back({{"mu", to_string(c.mu)}, {"coefficient", to_string(c.coefficient)}, {"vanishes", c.vanishes},
                    {"terms", terms}});
  }
  json ids = json::array();
  for (const auto& id : rep.identities)
    ids.push_back({{"name", id.name}, {"alpha", to_string(id.alpha)}, {"lhs", to_string(id.lhs)},
                   {"rhs", to_string(id.rhs)}, {"holds", id.holds}});
  j["coth"] = {{"total", combo_json(rep.total)}, {"constraints", cons}, {"identities", ids},
               {"all_vanish", rep.all_vanish}};

  const RSeries from_coth = volume_taylor(blocks, order);
  const RSeries from_ode = volume_phi2_from_ode(blocks, order);
  j["volume_phi2"] = series_json(from_coth);
  j["volume_phi2_ode"] = series_json(from_ode);
  j["engines_agree"] = from_coth == from_ode;

  const auto& es = spec.entries;
  if (es.size() == 3) {
    const auto r0 = rationalize(es[0].alpha / spec.lambda, kRationalMaxDen, 1e-9);
    const auto r1 = rationalize(es[1].alpha / spec.lambda, kRationalMaxDen, 1e-9);
    if (r0 && r1 && *r0 == Rational(1, 3) && *r1 == Rational(2, 3)) {
      const ThirdsResult t = thirds_t9(es[2].multiplicity, es[1].multiplicity);
      json coeffs = json::object();
      for (int i = 0; i < 4; ++i) coeffs["t" + std::to_string(3 + 2 * i)] = t.odd_coeffs[i].to_strings();
      j["thirds"] = {{"coefficients_in_c", coeffs},
                     {"phi0_matches_closed_form", t.phi0_matches},
                     {"sine_free", t.sine_free},
                     {"first_phi_dependent_order", t.first_phi_dependent_order}};
    }
  }
  out.write(in, j.dump(2) + "\n");
  return 0;
}

int run_classify(const Input& in, const Output& out, const ClassifierOptions& opt) {
  const ConstraintReport rep = classify(in.alg, opt);
  out.write(in, rep.to_json().dump(2) + "\n");
  if (!out.path.empty()) std::cout << to_string(rep.verdict) << (rep.first_failure.empty() ? "" : " " + rep.first_failure) << "\n";
  return exit_code(rep.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature, volume density and harmonicity checks for rank-one solvmanifolds"};
  app.set_version_flag("--version", SOLVHARM_VERSION);
  app.require_subcommand(1);
  std::uint64_t seed = kScanSeed;
  app.add_option("--seed", seed, "seed for the random plane scan")->capture_default_str();

  std::string spec_path, out_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("spec", spec_path, "algebra spec (JSON)")->required();
    sub->add_option("-o,--output", out_path, "output file; a manifest is written next to it");
  };

  auto* build = app.add_subcommand("build", "validate an algebra spec and print its structure");
  add_common(build);

  auto* curvature = app.add_subcommand("curvature", "ledger identities and sectional curvature scan");
  add_common(curvature);
  bool report = false;
  int planes = kScanPlanes;
  curvature->add_flag("--report", report, "include witness planes, Ricci tensor and connection residuals");
  curvature->add_option("--planes", planes, "random planes in the scan")->capture_default_str()->check(CLI::NonNegativeNumber);

  auto* geodesic = app.add_subcommand("geodesic", "q and Phi along the geodesic with initial angle phi (CSV)");
  add_common(geodesic);
  double phi = 0.0, tmax = 2.0;
  int samples = 21;
  geodesic->add_option("--phi", phi, "initial angle")->capture_default_str();
  geodesic->add_option("--tmax", tmax, "end time")->capture_default_str();
  geodesic->add_option("--samples", samples, "number of samples including t = 0")->capture_default_str();

  auto* density = app.add_subcommand("density", "volume density V(t, phi) on a grid");
  add_common(density);
  std::string grid_text = "20x20", density_format = "csv";
  double t0 = 0.1, t1 = 2.0;
  int steps = kDefaultSteps;
  bool parallel = false;
  density->add_option("--grid", grid_text, "t0,t1,nt,phi0,phi1,nphi or NTxNPHI")->capture_default_str();
  density->add_option("--t0", t0, "grid starts after t0")->capture_default_str();
  density->add_option("--t1", t1, "last t")->capture_default_str();
  density->add_option("--steps", steps, "RK4 steps")->capture_default_str();
  density->add_option("--out", density_format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  density->add_flag("--parallel", parallel, "evaluate phi columns concurrently");

  auto* series = app.add_subcommand("series", "exact Taylor data of the volume density");
  add_common(series);
  int order = kDefaultSeriesOrder;
  std::string series_format = "json";
  series->add_option("--order", order, "truncation order in t")->capture_default_str();
  series->add_option("--out", series_format, "output format")->check(CLI::IsMember({"json"}))->capture_default_str();

  auto* cls = app.add_subcommand("classify", "run the harmonicity battery");
  cls->add_option("spec", spec_path, "algebra spec (JSON)")->required();
  cls->add_option("--out,-o", out_path, "report file; a manifest is written next to it");
  bool cls_parallel = false;
  cls->add_flag("--parallel", cls_parallel, "run checks concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  Output out;
  out.path = out_path;
  out.seed = seed;
  try {
    const Input in = load(spec_path);
    if (build->parsed()) {
      out.subcommand = "build";
      return run_build(in, out);
    }
    if (curvature->parsed()) {
      out.subcommand = "curvature";
      out.params = {{"report", report}, {"planes", planes}};
      return run_curvature(in, out, report, planes);
    }
    if (geodesic->parsed()) {
      out.subcommand = "geodesic";
      out.params = {{"phi", fmt(phi)}, {"tmax", fmt(tmax)}, {"samples", samples}};
      return run_geodesic(in, out, phi, tmax, samples);
    }
    if (density->parsed()) {
      out.subcommand = "density";
      out.params = {{"grid", grid_text}, {"t0", fmt(t0)}, {"t1", fmt(t1)}, {"steps", steps}, {"out", density_format}};
      return run_density(in, out, parse_grid(grid_text, t0, t1), steps, density_format, parallel);
    }
    if (series->parsed()) {
      out.subcommand = "series";
      out.params = {{"order", order}, {"out", series_format}};
      return run_series(in, out, order);
    }
    out.subcommand = "classify";
    ClassifierOptions opt;
    opt.seed = seed;
    opt.parallel = cls_parallel;
    out.params = {{"parallel", cls_parallel}};
    return run_classify(in, out, opt);
  } catch (const InputError& e) {
    std::cerr << "solvharm: " << e.what() << "\n";
    return kExitInput;
  } catch (const UsageError& e) {
    std::cerr << "solvharm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "solvharm: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::StepCountTooSmall ? kExitUsage : kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "solvharm: " << e.what() << "\n";
    return kExitCompute;
  }
}
