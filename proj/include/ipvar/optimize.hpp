#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipvar/action.hpp"
#include "ipvar/fermionic.hpp"

namespace ipvar {

struct MinimizeConfig {
  int m = 2;
  int n = 1;
  int f = 1;
  OperatorMode mode = OperatorMode::projector;
  bool constrained = false;  // false: auxiliary principle with mu; true: kappa
  double mu = 0.5;
  double kappa = 0.0;
  int restarts = 32;
  std::uint64_t seed = 0;
  int max_iters = 20000;
  double step_init = 0.1;
  double grad_eps = 1e-5;       // central finite-difference step
  double tol_action = 1e-10;    // relative action change, over a 20-iteration window
  int penalty_loops = 6;        // constrained mode outer loops
  double penalty_initial = 1.0;
  double penalty_growth = 10.0;

  SpaceTimeStructure structure() const { return SpaceTimeStructure(m, n); }
  void validate() const;
};

struct RestartTrace {
  int iterations = 0;
  double final_action = 0.0;
};

struct MinimizeResult {
  FermionicOperator best;
  double best_action = 0.0;
  double constraint_residual = 0.0;  // constrained mode: sum|A|^2 - kappa
  double mu_estimate = 0.0;          // constrained mode: Lagrange multiplier estimate
  std::vector<RestartTrace> restarts;
  double wall_time_s = 0.0;
  bool feasible = true;
  std::string status;                 // "ok", warnings, or failure description
  double min_local_trace_abs = 0.0;   // min_x |Tr(E_x P)| at the best iterate
};

/// Multi-restart finite-difference descent on frame coordinates, with the
/// mode's construction acting as retraction after every step. One restart uses
/// the deterministic evenly-spread frame, the rest are seeded random draws.
MinimizeResult minimize_auxiliary(const MinimizeConfig& config);

/// Quadratic-penalty descent for the constrained principle: minimizes
/// sum|A^2| + w (sum|A|^2 - kappa)^2 with a growing w schedule. The reported
/// mu_estimate is 2 w (kappa - sum|A|^2) at the last iterate (an estimate).
MinimizeResult minimize_constrained(const MinimizeConfig& config);

struct ScanRow {
  int m = 0;
  double I_hat = 0.0;                // class P^f infimum estimate
  std::optional<double> J_hat;       // projector infimum estimate (f <= n*m only)
  bool monotone_ok = true;           // soft check against the spreading factor
};

/// Runs minimize_auxiliary per m in [m_lo, m_hi] for class P^f and projector
/// modes. Violations of the soft monotonicity check are flagged, not fatal.
std::vector<ScanRow> scan_infimum(int f, int n, int m_lo, int m_hi, double mu,
                                  const MinimizeConfig& base);

/// The deterministic evenly-spread starting frame: particle k occupies
/// negative direction (k mod n) across all points with DFT phases, so the
/// frame is orthonormal whenever f <= n*m.
Matrix spread_start_frame(const SpaceTimeStructure& st, int f);

/// Number of worker threads for restarts: IPVAR_THREADS if set, else the
/// hardware concurrency.
int restart_threads();

}  // namespace ipvar
