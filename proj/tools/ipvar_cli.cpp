#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ipvar/action.hpp"
#include "ipvar/fermionic.hpp"
#include "ipvar/gauge.hpp"
#include "ipvar/io.hpp"
#include "ipvar/optimize.hpp"
#include "ipvar/spectral.hpp"
#include "ipvar/transforms.hpp"

namespace {

using namespace ipvar;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerifyMismatch = 4;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text << "\n";
}

int run_evaluate(const std::string& frame_path, double mu, const std::string& out_path) {
  Json j = load_json(frame_path);
  SpaceTimeStructure st = frame_structure_from_json(j);
  FermionicOperator op = frame_from_json(j, st);
  ActionReport rep = action(st, op.matrix, mu);
  write_output(out_path, action_report_to_json(rep).dump(2));
  return kExitOk;
}

struct FlagOverrides {
  std::optional<double> mu;
  std::optional<double> kappa;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;

  void apply(MinimizeConfig& cfg) const {
    if (mu) cfg.mu = *mu;
    if (kappa) {
      cfg.kappa = *kappa;
      cfg.constrained = true;
    }
    if (mode) cfg.mode = mode_from_string(*mode);
    if (seed) cfg.seed = *seed;
    if (restarts) cfg.restarts = *restarts;
  }
};

int run_minimize(const std::string& config_path, const FlagOverrides& flags,
                 const std::string& out_path) {
  MinimizeConfig cfg = minimize_config_from_json(load_json(config_path));
  flags.apply(cfg);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  MinimizeResult res =
      cfg.constrained ? minimize_constrained(cfg) : minimize_auxiliary(cfg);
  write_output(out_path, minimize_result_to_json(res, cfg.structure()).dump(2));
  return kExitOk;
}

int run_scan(const std::string& config_path, const FlagOverrides& flags, int m_lo,
             int m_hi, const std::string& out_path) {
  MinimizeConfig base = minimize_config_from_json(load_json(config_path));
  flags.apply(base);
  if (m_lo < 1 || m_hi < m_lo) throw ParseError("scan: need 1 <= m-lo <= m-hi");
  std::vector<ScanRow> rows = scan_infimum(base.f, base.n, m_lo, m_hi, base.mu, base);
  write_output(out_path, scan_to_csv(rows, base.f, base.n, base.mu));
  return kExitOk;
}

// ---- verify: the built-in example suite ----

struct VerifyContext {
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%s  %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++failures;
  }

  void close(const std::string& name, double got, double want, double tol) {
    bool ok = std::abs(got - want) <= tol;
    check(name, ok,
          ok ? "" : "got " + format_double(got) + ", want " + format_double(want));
  }
};

Matrix projector_from_vector(const SpaceTimeStructure& st,
                             std::initializer_list<Complex> entries) {
  Matrix W(st.dim(), 1);
  Eigen::Index i = 0;
  for (Complex v : entries) W(i++, 0) = v;
  return projector_from_frame(st, W).matrix;
}

void verify_space_and_spectral(VerifyContext& v) {
  SpaceTimeStructure st(2, 1);
  Vector u = Vector::Zero(4);
  u[1] = 1.0;
  v.close("localized state has <u|u> = -1",
          std::real(inner_product(st.space(), u, u)), -1.0, 1e-14);

  SignatureSpace s2(Eigen::Vector2d(1.0, -1.0));
  Matrix rot(2, 2);
  rot << 0.0, 1.0, -1.0, 0.0;
  v.check("[[0,1],[-1,0]] is symmetric for S=diag(1,-1)",
          (adjoint(s2, rot) - rot).norm() < 1e-14 && is_symmetric(s2, rot));

  Matrix nil(2, 2);
  nil << 1.0, 1.0, -1.0, -1.0;
  v.check("nilpotent [[1,1],[-1,-1]] is symmetric", is_symmetric(s2, nil));
  v.close("nilpotent matrix has |A| = 0", spectral_weight(nil), 0.0, 1e-12);

  auto rot_roots = char_poly_roots(rot);
  v.check("[[0,1],[-1,0]] has roots {i,-i}",
          std::abs(rot_roots[0] * rot_roots[1] - Complex(1.0)) < 1e-14 &&
              std::abs(std::abs(rot_roots[0].imag()) - 1.0) < 1e-14 &&
              std::abs(rot_roots[0] + rot_roots[1]) < 1e-14);

  v.check("diag(1,-1) and diag(0,-1) are positive operators",
          is_positive_operator(s2, Matrix(Eigen::Vector2cd(1, -1).asDiagonal())) &&
              is_positive_operator(s2, Matrix(Eigen::Vector2cd(0, -1).asDiagonal())));

  auto [negs, poss] =
      positive_spectrum_split(s2, Matrix(Eigen::Vector2cd(1, -1).asDiagonal()));
  v.check("positive spectrum splits into {-1} and {1}",
          negs.size() == 1 && poss.size() == 1 && std::abs(negs[0] + 1.0) < 1e-12 &&
              std::abs(poss[0] - 1.0) < 1e-12);

  double k = 1.3;
  Matrix Ak = k * Matrix::Identity(2, 2);
  SpectralWeightReport rep = spectral_weight_report(Ak);
  v.close("|(k id)^2| = 2nk^2 (n=1)", rep.weight_sq, 2 * k * k, 1e-12);
  v.close("|k id|^2 = 4n^2k^2 (n=1)", rep.weight * rep.weight, 4 * k * k, 1e-12);
  v.check("scalar Lagrangian negative above the critical mu",
          lagrangian(Ak, 0.6) < 0.0);
}

void verify_one_particle_examples(VerifyContext& v) {
  SpaceTimeStructure st(2, 1);
  Matrix P1 = projector_from_vector(st, {0.0, 1.0, 0.0, 0.0});
  Matrix expect1 = Matrix::Zero(4, 4);
  expect1(1, 1) = 1.0;
  v.check("localized frame gives P = diag(0,1,0,0)", (P1 - expect1).norm() < 1e-14);
  v.check("localized P is a projector", is_projector(st.space(), P1));
  v.check("localized P(1,1) = diag(0,1)",
          (localize(st, P1, 0, 0) - Matrix(Eigen::Vector2cd(0, 1).asDiagonal())).norm() <
              1e-14);
  v.check("localized local traces are (1, 0)",
          std::abs(local_trace(st, P1, 0) - Complex(1.0)) < 1e-14 &&
              std::abs(local_trace(st, P1, 1)) < 1e-14);

  Matrix A11 = closed_chain(st, P1, 0, 0);
  v.check("localized closed chains: A_11 = diag(0,1), the rest vanish",
          (A11 - Matrix(Eigen::Vector2cd(0, 1).asDiagonal())).norm() < 1e-14 &&
              closed_chain(st, P1, 0, 1).norm() == 0.0 &&
              closed_chain(st, P1, 1, 0).norm() == 0.0 &&
              closed_chain(st, P1, 1, 1).norm() == 0.0);
  v.close("|A_11| = |A_11^2| = 1", spectral_weight(A11), 1.0, 1e-12);
  v.close("L(diag(0,1)) at mu=1/2 is 1/2", lagrangian(A11, 0.5), 0.5, 1e-12);
  v.close("pair-sum identity value for diag(0,1)", critical_lagrangian_pairsum(A11),
          0.5, 1e-12);
  v.close("localized action = 1/2", action_total(st, P1, 0.5), 0.5, 1e-10);

  double rt2 = std::sqrt(2.0);
  Matrix P2 = projector_from_vector(st, {0.0, 1.0 / rt2, 0.0, 1.0 / rt2});
  v.check("spread frame gives the all-1/2 pattern",
          std::abs(P2(1, 1) - Complex(0.5)) < 1e-14 &&
              std::abs(P2(1, 3) - Complex(0.5)) < 1e-14 &&
              std::abs(P2(3, 1) - Complex(0.5)) < 1e-14 &&
              std::abs(P2(3, 3) - Complex(0.5)) < 1e-14 &&
              std::abs(P2.cwiseAbs().sum() - 2.0) < 1e-13);
  v.check("spread P is a projector", is_projector(st.space(), P2));
  Matrix blk = localize(st, P2, 0, 1);
  v.check("spread P(1,2) = [[0,0],[0,1/2]]",
          (blk - 0.5 * Matrix(Eigen::Vector2cd(0, 1).asDiagonal())).norm() < 1e-14);
  bool chains_ok = true;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      SpectralWeightReport r = spectral_weight_report(closed_chain(st, P2, x, y));
      chains_ok = chains_ok && std::abs(r.weight * r.weight - 1.0 / 16) < 1e-12 &&
                  std::abs(r.weight_sq - 1.0 / 16) < 1e-12;
    }
  v.check("spread chains have |A_ij|^2 = |A_ij^2| = 1/16", chains_ok);
  v.close("spread action = 1/8", action_total(st, P2, 0.5), 0.125, 1e-10);

  // Closed-form one-parameter families on 21-point grids.
  bool fam_a = true, fam_b = true;
  for (int i = 0; i < 21; ++i) {
    double phi = -1.0 + 2.0 * i / 20.0;
    Matrix P = projector_from_vector(st, {std::sinh(phi), 0.0, 0.0, std::cosh(phi)});
    double want =
        0.5 * std::pow(std::pow(std::cosh(phi), 4) + std::pow(std::sinh(phi), 4), 2);
    fam_a = fam_a && std::abs(action_total(st, P, 0.5) - want) < 1e-8;

    double psi = M_PI * i / 20.0;
    Matrix Q = projector_from_vector(st, {0.0, std::cos(psi), 0.0, std::sin(psi)});
    double want_b =
        0.5 * std::pow(std::pow(std::cos(psi), 4) + std::pow(std::sin(psi), 4), 2);
    fam_b = fam_b && std::abs(action_total(st, Q, 0.5) - want_b) < 1e-8;
  }
  v.check("family u=(sinh,0,0,cosh): S = (cosh^4+sinh^4)^2/2 on the grid", fam_a);
  v.check("family u=(0,cos,0,sin): S = (cos^4+sin^4)^2/2 on the grid", fam_b);
  Matrix Pmin = projector_from_vector(
      st, {0.0, std::cos(M_PI / 4), 0.0, std::sin(M_PI / 4)});
  v.close("second family at phi = pi/4 gives 1/8", action_total(st, Pmin, 0.5), 0.125,
          1e-10);
}

void verify_two_particle_family(VerifyContext& v) {
  SpaceTimeStructure st(2, 1);
  Matrix Plocal = two_particle_projector(0.0, 0.0);
  v.check("Plocal local traces are (1,1)",
          std::abs(local_trace(st, Plocal, 0) - Complex(1.0)) < 1e-12 &&
              std::abs(local_trace(st, Plocal, 1) - Complex(1.0)) < 1e-12);
  v.close("Plocal action = 1", action_total(st, Plocal, 0.5), 1.0, 1e-10);
  v.close("action surface at (0,0) = 1", two_particle_action_surface(0.0, 0.0), 1.0, 1e-14);

  bool surface_ok = true;
  for (double a : {-0.4, 0.0, 0.3})
    for (double b : {-0.2, 0.0, 0.5}) {
      double got = action_total(st, two_particle_projector(a, b), 0.5);
      surface_ok = surface_ok && std::abs(got - two_particle_action_surface(a, b)) < 1e-8;
    }
  v.check("explicit P(alpha,beta) matches the closed-form surface", surface_ok);
}

void verify_four_point_spreading(VerifyContext& v) {
  SpaceTimeStructure st(4, 1);
  Matrix W = Matrix::Zero(8, 2);
  W(1, 0) = 1.0;  // particle 1 at point 0
  W(3, 1) = 1.0;  // particle 2 at point 1
  Matrix Ploc = projector_from_frame(st, W).matrix;
  v.close("localized two-particle action = f/2 = 1", action_total(st, Ploc, 0.5), 1.0,
          1e-8);

  double rt2 = std::sqrt(2.0);
  Matrix Ws = Matrix::Zero(8, 2);
  Ws(1, 0) = Ws(3, 0) = 1.0 / rt2;  // particle 1 over points 0,1
  Ws(5, 1) = Ws(7, 1) = 1.0 / rt2;  // particle 2 over points 2,3
  Matrix Psp = projector_from_frame(st, Ws).matrix;
  v.close("even-spread action = (f/2)(f/m)^2 = 1/4", action_total(st, Psp, 0.5), 0.25,
          1e-8);
}

void verify_bounds_gauge_spread(VerifyContext& v) {
  SpaceTimeStructure one(1, 1);
  Matrix P = projector_from_vector(one, {0.0, 1.0});
  BoundsReport b = lower_bounds(one, P);
  v.check("one-point global bound 1/256 below S = 1/2",
          std::abs(b.global - 1.0 / 256) < 1e-14 &&
              action_total(one, P, 0.5) >= b.global);

  SpaceTimeStructure st(2, 1);
  double th = 1.5;
  Matrix boost(2, 2);
  boost << std::cosh(th), std::sinh(th), std::sinh(th), std::cosh(th);
  Matrix S1 = st.block_space().signature_matrix();
  v.check("boost block is a valid gauge block",
          (boost.adjoint() * S1 * boost - S1).norm() < 1e-12);

  double rt2 = std::sqrt(2.0);
  Matrix P2 = projector_from_vector(st, {0.0, 1.0 / rt2, 0.0, 1.0 / rt2});
  GaugeTransformation U = random_gauge(st, 0.4, 2024);
  v.close("random gauge keeps the spread action unchanged",
          action_total(st, apply_gauge(st, P2, U), 0.5), 0.125, 1e-7);

  GaugeTransformation boost1 = GaugeTransformation::identity(st);
  boost1.blocks[0] = boost;
  GaugeTransformation boost3 = GaugeTransformation::identity(st);
  Matrix big(2, 2);
  big << std::cosh(3 * th), std::sinh(3 * th), std::sinh(3 * th), std::cosh(3 * th);
  boost3.blocks[0] = big;
  v.check("boosted family is unbounded in norm",
          apply_gauge(st, P2, boost3).norm() > apply_gauge(st, P2, boost1).norm() &&
              apply_gauge(st, P2, boost1).norm() > P2.norm());

  Matrix P1 = projector_from_vector(st, {0.0, 1.0, 0.0, 0.0});
  v.check("localized P is not homogeneous under the swap",
          !check_homogeneous(st, P1, {1, 0}, GaugeTransformation::identity(st), 1e-8));

  SpreadResult sr = spread_point(st, P1, 0.5);
  double before = action_total(st, P1, 0.5);
  double after = action_total(sr.structure, sr.operator_matrix, 0.5);
  v.check("spreading the localized point obeys the 5/16 bound",
          std::abs(before - 0.5) < 1e-12 && after <= 5.0 / 16 + 1e-9);
  int x = sr.spread_index;
  v.check("spread kernel bookkeeping",
          (localize(sr.structure, sr.operator_matrix, x, x) -
           0.5 * localize(st, P1, x, x)).norm() == 0.0 &&
              (localize(sr.structure, sr.operator_matrix, 2, 2) -
               0.5 * localize(st, P1, x, x)).norm() == 0.0);
}

void verify_optimizer(VerifyContext& v) {
  MinimizeConfig cfg;
  cfg.m = 2;
  cfg.n = 1;
  cfg.f = 1;
  cfg.mu = 0.5;
  cfg.restarts = 20;
  cfg.seed = 1;
  MinimizeResult r = minimize_auxiliary(cfg);
  v.close("minimizer reproduces the two-point one-particle minimum 1/8", r.best_action, 0.125, 1e-4);

  MinimizeConfig cfg2 = cfg;
  cfg2.f = 2;
  cfg2.restarts = 8;
  MinimizeResult r2 = minimize_auxiliary(cfg2);
  SpaceTimeStructure st2 = cfg2.structure();
  v.close("minimizer reproduces the two-particle minimum 1", r2.best_action, 1.0, 1e-3);
  v.check("two-particle minimizer has local traces (1,1)",
          std::abs(local_trace(st2, r2.best.matrix, 0) - Complex(1.0)) < 1e-2 &&
              std::abs(local_trace(st2, r2.best.matrix, 1) - Complex(1.0)) < 1e-2);

  MinimizeConfig cfg1 = cfg;
  cfg1.m = 1;
  cfg1.restarts = 2;
  cfg1.max_iters = 200;
  v.close("one-point run returns the constant f - f^2/2n",
          minimize_auxiliary(cfg1).best_action, 0.5, 1e-8);

  MinimizeConfig cfgc = cfg;
  cfgc.mode = OperatorMode::rank_f_unnormalized;
  cfgc.constrained = true;
  cfgc.kappa = 0.25;  // the spread configuration's constraint value
  cfgc.restarts = 4;
  MinimizeResult rc = minimize_constrained(cfgc);
  v.check("unnormalized constrained minimum has S at the estimated multiplier ~ 0",
          std::abs(rc.best_action) < 1e-5,
          "got " + format_double(rc.best_action));

  MinimizeConfig base = cfg;
  base.restarts = 6;
  auto rows = scan_infimum(1, 1, 1, 2, 0.5, base);
  bool scan_ok = rows.size() == 2 && std::abs(rows[0].I_hat - 0.5) < 1e-6 &&
                 rows[1].I_hat <= 0.125 + 1e-6;
  for (const ScanRow& row : rows)
    scan_ok = scan_ok && row.I_hat >= 1.0 / (256.0 * row.m * row.m * row.m) - 1e-9;
  v.check("scan: I(1,1) = 1/2, I(1,2) <= 1/8, rows above the global bound", scan_ok);
}

int run_verify() {
  VerifyContext v;
  verify_space_and_spectral(v);
  verify_one_particle_examples(v);
  verify_two_particle_family(v);
  verify_four_point_spreading(v);
  verify_bounds_gauge_spread(v);
  verify_optimizer(v);
  if (v.failures > 0) {
    std::printf("%d check(s) failed\n", v.failures);
    return kExitVerifyMismatch;
  }
  std::printf("all checks passed\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational principle for fermionic projectors: evaluation, "
               "minimization, and verification"};
  app.require_subcommand(1);

  std::string frame_path, config_path, out_path;
  double mu = 0.5;
  FlagOverrides flags;

  auto* eval = app.add_subcommand("evaluate", "Evaluate the action of a frame file");
  eval->add_option("frame", frame_path, "Frame JSON file")->required();
  eval->add_option("--mu", mu, "Lagrange multiplier (default 1/2)");
  eval->add_option("--out", out_path, "Write the report here instead of stdout");

  auto add_override_flags = [&flags, &out_path](CLI::App* cmd) {
    cmd->add_option("--mu", flags.mu, "Override mu");
    cmd->add_option("--kappa", flags.kappa, "Override kappa (switches to constrained)");
    cmd->add_option("--mode", flags.mode, "Override mode");
    cmd->add_option("--seed", flags.seed, "Override seed");
    cmd->add_option("--restarts", flags.restarts, "Override restart count");
    cmd->add_option("--out", out_path, "Write results here instead of stdout");
  };

  auto* minimize = app.add_subcommand("minimize", "Minimize the action");
  minimize->add_option("config", config_path, "Config JSON file")->required();
  add_override_flags(minimize);

  int m_lo = 1, m_hi = 3;
  auto* scan = app.add_subcommand("scan", "Scan infima over the number of points");
  scan->add_option("config", config_path, "Base config JSON file")->required();
  scan->add_option("--m-lo", m_lo, "Smallest m");
  scan->add_option("--m-hi", m_hi, "Largest m");
  add_override_flags(scan);

  auto* verify = app.add_subcommand("verify", "Run the built-in example suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (eval->parsed()) return run_evaluate(frame_path, mu, out_path);
    if (minimize->parsed()) return run_minimize(config_path, flags, out_path);
    if (scan->parsed()) return run_scan(config_path, flags, m_lo, m_hi, out_path);
    if (verify->parsed()) return run_verify();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
