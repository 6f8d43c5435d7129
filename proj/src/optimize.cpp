#include "ipvar/optimize.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>

#include "ipvar/spectral.hpp"

namespace ipvar {

namespace {

constexpr double kInfeasible = std::numeric_limits<double>::infinity();

Eigen::VectorXd pack(const Matrix& W) {
  Eigen::VectorXd x(2 * W.size());
  for (Eigen::Index i = 0; i < W.size(); ++i) {
    x[2 * i] = std::real(W(i));
    x[2 * i + 1] = std::imag(W(i));
  }
  return x;
}

Matrix unpack(const Eigen::VectorXd& x, Eigen::Index rows, Eigen::Index cols) {
  Matrix W(rows, cols);
  for (Eigen::Index i = 0; i < W.size(); ++i) W(i) = Complex(x[2 * i], x[2 * i + 1]);
  return W;
}

struct DescentOutcome {
  Eigen::VectorXd coords;
  double value = kInfeasible;
  int iterations = 0;
};

// Finite-difference gradient descent on frame coordinates. The objective maps
// a raw frame to a value and is +inf where the mode's construction fails;
// retract maps a raw frame to the mode-normalized one after accepted steps.
DescentOutcome descend(Eigen::VectorXd x, Eigen::Index rows, Eigen::Index cols,
                       const std::function<double(const Matrix&)>& objective,
                       const std::function<Matrix(const Matrix&)>& retract,
                       const MinimizeConfig& cfg) {
  DescentOutcome out;
  double fx = objective(unpack(x, rows, cols));
  if (!std::isfinite(fx)) {
    out.coords = std::move(x);
    return out;
  }
  double step = cfg.step_init;
  std::vector<double> history = {fx};
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    out.iterations = iter + 1;
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += cfg.grad_eps;
      xm[i] -= cfg.grad_eps;
      double fp = objective(unpack(xp, rows, cols));
      double fm = objective(unpack(xm, rows, cols));
      g[i] = (std::isfinite(fp) && std::isfinite(fm)) ? (fp - fm) / (2.0 * cfg.grad_eps)
                                                      : 0.0;
    }
    double g2 = g.squaredNorm();
    if (g2 == 0.0) break;

    bool accepted = false;
    double s = step;
    while (s > 1e-16) {
      Eigen::VectorXd xc = x - s * g;
      double fc = objective(unpack(xc, rows, cols));
      // Armijo, with a nonmonotone safeguard for the nonsmooth |lambda| terms.
      if (std::isfinite(fc) &&
          (fc <= fx - 1e-4 * s * g2 || (s <= 1e-10 && fc <= fx + 1e-12))) {
        x = pack(retract(unpack(xc, rows, cols)));
        fx = objective(unpack(x, rows, cols));
        step = std::min(s * 2.0, 1.0);
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;

    history.push_back(fx);
    if (history.size() > 20) {
      double past = history[history.size() - 21];
      if (past - fx < cfg.tol_action * std::max(1.0, std::abs(fx))) break;
    }
  }
  out.coords = std::move(x);
  out.value = fx;
  return out;
}

Matrix random_start(const SpaceTimeStructure& st, const MinimizeConfig& cfg,
                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix W(st.dim(), cfg.f);
  for (Eigen::Index i = 0; i < W.size(); ++i) W(i) = Complex(gauss(rng), gauss(rng));
  return W;
}

struct RestartResult {
  DescentOutcome outcome;
  bool feasible = false;
};

void run_restarts(const SpaceTimeStructure& st, const MinimizeConfig& cfg,
                  const std::function<RestartResult(const Matrix& start)>& one,
                  std::vector<RestartResult>& results) {
  results.resize(cfg.restarts);
  std::vector<Matrix> starts(cfg.restarts);
  for (int i = 0; i < cfg.restarts; ++i) {
    std::uint64_t s = cfg.seed + 0x9e3779b97f4a7c15ull * (i + 1);
    if (i == 0 && cfg.f <= st.spin_half() * st.points())
      starts[i] = spread_start_frame(st, cfg.f);
    else
      starts[i] = random_start(st, cfg, s);
  }
  int nthreads = std::min(restart_threads(), cfg.restarts);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= cfg.restarts) return;
      results[i] = one(starts[i]);
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
}

}  // namespace

void MinimizeConfig::validate() const {
  if (m < 1 || n < 1 || f < 1) throw std::invalid_argument("config: m, n, f >= 1");
  if (restarts < 1) throw std::invalid_argument("config: restarts >= 1");
  if (max_iters < 1 || step_init <= 0 || grad_eps <= 0 || tol_action <= 0)
    throw std::invalid_argument("config: iteration parameters must be positive");
  if (mode == OperatorMode::projector && f > n * m)
    throw std::invalid_argument("config: projector mode needs f <= n*m");
  if (constrained && kappa <= 0) throw std::invalid_argument("config: kappa > 0 required");
}

Matrix spread_start_frame(const SpaceTimeStructure& st, int f) {
  if (f > st.spin_half() * st.points())
    throw std::invalid_argument("spread_start_frame: f <= n*m required");
  int m = st.points(), n = st.spin_half();
  Matrix W = Matrix::Zero(st.dim(), f);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  for (int k = 0; k < f; ++k) {
    int dir = k % n;            // which negative direction within the block
    int harmonic = k / n;       // DFT phase index, < m
    for (int x = 0; x < m; ++x) {
      double phase = 2.0 * M_PI * x * harmonic / m;
      W(st.block_start(x) + 2 * dir + 1, k) = norm * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return W;
}

int restart_threads() {
  if (const char* env = std::getenv("IPVAR_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

MinimizeResult minimize_auxiliary(const MinimizeConfig& cfg) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();
  SpaceTimeStructure st = cfg.structure();

  auto objective = [&](const Matrix& W) -> double {
    try {
      return action_total(st, operator_from_frame(st, W, cfg.mode).matrix, cfg.mu);
    } catch (const FrameError&) {
      return kInfeasible;
    }
  };
  auto retract = [&](const Matrix& W) -> Matrix {
    try {
      return operator_from_frame(st, W, cfg.mode).frame;
    } catch (const FrameError&) {
      return W;
    }
  };
  auto one = [&](const Matrix& start) -> RestartResult {
    RestartResult r;
    r.outcome = descend(pack(start), st.dim(), cfg.f, objective, retract, cfg);
    r.feasible = std::isfinite(r.outcome.value);
    return r;
  };

  std::vector<RestartResult> results;
  run_restarts(st, cfg, one, results);

  MinimizeResult res;
  int best_i = -1;
  for (int i = 0; i < cfg.restarts; ++i) {
    res.restarts.push_back({results[i].outcome.iterations, results[i].outcome.value});
    if (results[i].feasible &&
        (best_i < 0 || results[i].outcome.value < results[best_i].outcome.value))
      best_i = i;
  }
  if (best_i < 0) {
    res.feasible = false;
    res.status = "no feasible start found";
    return res;
  }
  res.best = operator_from_frame(st, unpack(results[best_i].outcome.coords, st.dim(), cfg.f),
                                 cfg.mode);
  res.best_action = action_total(st, res.best.matrix, cfg.mu);
  res.min_local_trace_abs = std::numeric_limits<double>::infinity();
  for (int x = 0; x < st.points(); ++x)
    res.min_local_trace_abs =
        std::min(res.min_local_trace_abs, std::abs(local_trace(st, res.best.matrix, x)));
  res.status = cfg.mu > critical_mu(cfg.n) + 1e-15
                   ? "warning: mu > 1/(2n), action unbounded below"
                   : "ok";
  res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

MinimizeResult minimize_constrained(const MinimizeConfig& cfg) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();
  SpaceTimeStructure st = cfg.structure();

  auto sums = [&](const Matrix& W) -> std::pair<double, double> {
    return action_weight_sums(st, operator_from_frame(st, W, cfg.mode).matrix);
  };
  auto retract = [&](const Matrix& W) -> Matrix {
    try {
      return operator_from_frame(st, W, cfg.mode).frame;
    } catch (const FrameError&) {
      return W;
    }
  };

  auto one = [&](Matrix start) -> RestartResult {
    RestartResult r;
    try {
      // In the scaling-free mode, rescale the start onto the constraint set.
      if (cfg.mode == OperatorMode::rank_f_unnormalized) {
        double con = sums(start).second;
        if (con > 0) start *= std::pow(cfg.kappa / con, 0.125);
      }
    } catch (const FrameError&) {
      return r;
    }
    Eigen::VectorXd x = pack(start);
    double w = cfg.penalty_initial;
    DescentOutcome step;
    for (int loop = 0; loop < cfg.penalty_loops; ++loop, w *= cfg.penalty_growth) {
      auto objective = [&, w](const Matrix& W) -> double {
        try {
          auto [sq, con] = sums(W);
          double viol = con - cfg.kappa;
          return sq + w * viol * viol;
        } catch (const FrameError&) {
          return kInfeasible;
        }
      };
      DescentOutcome o = descend(x, st.dim(), cfg.f, objective, retract, cfg);
      if (!std::isfinite(o.value)) return r;
      step.iterations += o.iterations;
      step.value = o.value;
      x = o.coords;
      step.coords = x;
    }
    r.outcome = std::move(step);
    r.feasible = true;
    return r;
  };

  std::vector<RestartResult> results;
  run_restarts(st, cfg, one, results);

  MinimizeResult res;
  int best_i = -1;
  for (int i = 0; i < cfg.restarts; ++i) {
    res.restarts.push_back({results[i].outcome.iterations, results[i].outcome.value});
    if (results[i].feasible &&
        (best_i < 0 || results[i].outcome.value < results[best_i].outcome.value))
      best_i = i;
  }
  if (best_i < 0) {
    res.feasible = false;
    res.status = "no feasible start found";
    return res;
  }
  res.best = operator_from_frame(st, unpack(results[best_i].outcome.coords, st.dim(), cfg.f),
                                 cfg.mode);
  auto [sq, con] = action_weight_sums(st, res.best.matrix);
  double w_final = cfg.penalty_initial * std::pow(cfg.penalty_growth, cfg.penalty_loops - 1);
  res.constraint_residual = con - cfg.kappa;
  res.mu_estimate = 2.0 * w_final * (cfg.kappa - con);
  res.best_action = sq - res.mu_estimate * con;
  res.min_local_trace_abs = std::numeric_limits<double>::infinity();
  for (int x = 0; x < st.points(); ++x)
    res.min_local_trace_abs =
        std::min(res.min_local_trace_abs, std::abs(local_trace(st, res.best.matrix, x)));
  res.status = std::abs(res.constraint_residual) <= 1e-5 * cfg.kappa
                   ? "ok"
                   : "warning: constraint residual above 1e-5 * kappa";
  res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<ScanRow> scan_infimum(int f, int n, int m_lo, int m_hi, double mu,
                                  const MinimizeConfig& base) {
  if (m_lo < 1 || m_hi < m_lo) throw std::invalid_argument("scan: bad m range");
  std::vector<ScanRow> rows;
  for (int m = m_lo; m <= m_hi; ++m) {
    MinimizeConfig cfg = base;
    cfg.m = m;
    cfg.n = n;
    cfg.f = f;
    cfg.mu = mu;
    cfg.constrained = false;
    ScanRow row;
    row.m = m;
    cfg.mode = OperatorMode::class_pf;
    row.I_hat = minimize_auxiliary(cfg).best_action;
    if (f <= n * m) {
      cfg.mode = OperatorMode::projector;
      row.J_hat = minimize_auxiliary(cfg).best_action;
    }
    if (!rows.empty()) {
      double limit = (1.0 - 3.0 / (4.0 * (m - 1))) * rows.back().I_hat + 1e-6;
      row.monotone_ok = row.I_hat <= limit;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ipvar
