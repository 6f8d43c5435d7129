#include "ipvar/io.hpp"

#include <cstdio>

namespace ipvar {

namespace {

Json complex_list(const Matrix& A, bool row_major) {
  Json list = Json::array();
  if (row_major) {
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      for (Eigen::Index j = 0; j < A.cols(); ++j)
        list.push_back({std::real(A(i, j)), std::imag(A(i, j))});
  } else {
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      for (Eigen::Index i = 0; i < A.rows(); ++i)
        list.push_back({std::real(A(i, j)), std::imag(A(i, j))});
  }
  return list;
}

Matrix complex_matrix(const Json& list, Eigen::Index rows, Eigen::Index cols,
                      bool row_major) {
  if (!list.is_array() || static_cast<Eigen::Index>(list.size()) != rows * cols)
    throw ParseError("entry list has wrong length");
  Matrix A(rows, cols);
  Eigen::Index k = 0;
  for (const auto& e : list) {
    if (!e.is_array() || e.size() != 2) throw ParseError("entries must be [re, im] pairs");
    Complex v(e[0].get<double>(), e[1].get<double>());
    if (row_major)
      A(k / cols, k % cols) = v;
    else
      A(k % rows, k / rows) = v;
    ++k;
  }
  return A;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json matrix_to_json(const Matrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix_to_json: square only");
  return Json{{"dim", A.rows()}, {"entries", complex_list(A, true)}};
}

Matrix matrix_from_json(const Json& j) {
  try {
    Eigen::Index d = j.at("dim").get<Eigen::Index>();
    if (d < 1) throw ParseError("dim must be positive");
    return complex_matrix(j.at("entries"), d, d, true);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("matrix: ") + e.what());
  }
}

Json structure_to_json(const SpaceTimeStructure& st) {
  return Json{{"m", st.points()}, {"n", st.spin_half()}};
}

SpaceTimeStructure structure_from_json(const Json& j) {
  try {
    return SpaceTimeStructure(j.at("m").get<int>(), j.at("n").get<int>());
  } catch (const Json::exception& e) {
    throw ParseError(std::string("structure: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("structure: ") + e.what());
  }
}

Json frame_to_json(const FermionicOperator& op, const SpaceTimeStructure& st) {
  return Json{{"f", op.f},
              {"mode", to_string(op.mode)},
              {"W", complex_list(op.frame, false)},
              {"structure", structure_to_json(st)}};
}

SpaceTimeStructure frame_structure_from_json(const Json& j) {
  if (!j.contains("structure")) throw ParseError("frame: missing embedded structure");
  return structure_from_json(j.at("structure"));
}

FermionicOperator frame_from_json(const Json& j, const SpaceTimeStructure& st) {
  try {
    int f = j.at("f").get<int>();
    if (f < 1) throw ParseError("frame: f must be positive");
    OperatorMode mode = mode_from_string(j.at("mode").get<std::string>());
    Matrix W = complex_matrix(j.at("W"), st.dim(), f, false);
    return operator_from_frame(st, W, mode);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("frame: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("frame: ") + e.what());
  }
}

FermionicOperator frame_from_json(const Json& j) {
  return frame_from_json(j, frame_structure_from_json(j));
}

Json gauge_to_json(const GaugeTransformation& g) {
  Json blocks = Json::array();
  for (const Matrix& B : g.blocks) blocks.push_back(matrix_to_json(B));
  return Json{{"blocks", blocks}};
}

GaugeTransformation gauge_from_json(const Json& j) {
  try {
    GaugeTransformation g;
    for (const auto& b : j.at("blocks")) g.blocks.push_back(matrix_from_json(b));
    return g;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("gauge: ") + e.what());
  }
}

Json action_report_to_json(const ActionReport& rep) {
  Json lag = Json::array();
  for (Eigen::Index x = 0; x < rep.lagrangians.rows(); ++x) {
    Json row = Json::array();
    for (Eigen::Index y = 0; y < rep.lagrangians.cols(); ++y)
      row.push_back(rep.lagrangians(x, y));
    lag.push_back(row);
  }
  Json traces = Json::array();
  for (const Complex& t : rep.local_traces)
    traces.push_back({std::real(t), std::imag(t)});
  Json out{{"mu", rep.mu},
           {"lagrangians", lag},
           {"total", rep.total},
           {"constraint_value", rep.constraint_value},
           {"objective_sq", rep.objective_sq},
           {"local_traces", traces},
           {"bounds_valid", rep.bounds_valid}};
  if (rep.bounds_valid) {
    Json local = Json::array();
    for (const LocalBounds& b : rep.bounds.local)
      local.push_back({{"llb1", b.llb1}, {"llb2", b.llb2}, {"llb2_valid", b.llb2_valid}});
    out["bounds"] = Json{{"global", rep.bounds.global}, {"local", local}};
  }
  return out;
}

Json minimize_config_to_json(const MinimizeConfig& cfg) {
  return Json{{"m", cfg.m},
              {"n", cfg.n},
              {"f", cfg.f},
              {"mode", to_string(cfg.mode)},
              {"constrained", cfg.constrained},
              {"mu", cfg.mu},
              {"kappa", cfg.kappa},
              {"restarts", cfg.restarts},
              {"seed", cfg.seed},
              {"max_iters", cfg.max_iters},
              {"step_init", cfg.step_init},
              {"grad_eps", cfg.grad_eps},
              {"tol_action", cfg.tol_action},
              {"penalty_loops", cfg.penalty_loops},
              {"penalty_initial", cfg.penalty_initial},
              {"penalty_growth", cfg.penalty_growth}};
}

MinimizeConfig minimize_config_from_json(const Json& j) {
  MinimizeConfig cfg;
  try {
    cfg.m = j.at("m").get<int>();
    cfg.n = j.at("n").get<int>();
    cfg.f = j.at("f").get<int>();
    if (j.contains("mode")) cfg.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("constrained")) cfg.constrained = j.at("constrained").get<bool>();
    if (j.contains("mu")) cfg.mu = j.at("mu").get<double>();
    if (j.contains("kappa")) cfg.kappa = j.at("kappa").get<double>();
    if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<int>();
    if (j.contains("step_init")) cfg.step_init = j.at("step_init").get<double>();
    if (j.contains("grad_eps")) cfg.grad_eps = j.at("grad_eps").get<double>();
    if (j.contains("tol_action")) cfg.tol_action = j.at("tol_action").get<double>();
    if (j.contains("penalty_loops")) cfg.penalty_loops = j.at("penalty_loops").get<int>();
    if (j.contains("penalty_initial"))
      cfg.penalty_initial = j.at("penalty_initial").get<double>();
    if (j.contains("penalty_growth"))
      cfg.penalty_growth = j.at("penalty_growth").get<double>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return cfg;
}

Json minimize_result_to_json(const MinimizeResult& res, const SpaceTimeStructure& st) {
  Json traces = Json::array();
  for (const RestartTrace& t : res.restarts)
    traces.push_back({{"iterations", t.iterations}, {"final_action", t.final_action}});
  Json out{{"feasible", res.feasible},
           {"status", res.status},
           {"restarts", traces},
           {"wall_time_s", res.wall_time_s}};
  if (res.feasible) {
    out["best_frame"] = frame_to_json(res.best, st);
    out["best_action"] = res.best_action;
    out["constraint_residual"] = res.constraint_residual;
    out["mu_estimate"] = res.mu_estimate;
    out["min_local_trace_abs"] = res.min_local_trace_abs;
  }
  return out;
}

std::string action_csv_row(const SpaceTimeStructure& st, const ActionReport& rep) {
  double f = 0.0;
  for (const Complex& t : rep.local_traces) f += std::real(t);
  return std::to_string(st.points()) + "," + std::to_string(st.spin_half()) + "," +
         format_double(f) + "," + format_double(rep.mu) + "," + format_double(rep.total) +
         "," + format_double(rep.constraint_value);
}

std::string scan_to_csv(const std::vector<ScanRow>& rows, int f, int n, double mu) {
  std::string out = "m,n,f,mu,I_hat,J_hat,monotone_ok\n";
  for (const ScanRow& r : rows) {
    out += std::to_string(r.m) + "," + std::to_string(n) + "," + std::to_string(f) + "," +
           format_double(mu) + "," + format_double(r.I_hat) + ",";
    out += r.J_hat ? format_double(*r.J_hat) : std::string("");
    out += std::string(",") + (r.monotone_ok ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace ipvar
