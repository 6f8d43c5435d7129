#include "ipvar/action.hpp"

#include <cmath>

#include "ipvar/fermionic.hpp"
#include "ipvar/spectral.hpp"

namespace ipvar {

double lagrangian(const Matrix& A, double mu) {
  SpectralWeightReport rep = spectral_weight_report(A);
  return rep.weight_sq - mu * rep.weight * rep.weight;
}

double critical_lagrangian_pairsum(const Matrix& A) {
  std::vector<Complex> roots = char_poly_roots(A);
  int k = static_cast<int>(roots.size());
  double sum = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double d = std::abs(roots[i]) - std::abs(roots[j]);
      sum += d * d;
    }
  return sum / (2.0 * k);  // 2n = k, so 1/(4n) = 1/(2k)
}

ActionReport action(const SpaceTimeStructure& st, const Matrix& P, double mu) {
  if (P.rows() != st.dim() || P.cols() != st.dim())
    throw DimensionError("action: P must be dim x dim");
  int m = st.points();
  ActionReport rep;
  rep.mu = mu;
  rep.lagrangians = Eigen::MatrixXd::Zero(m, m);
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      SpectralWeightReport sw = spectral_weight_report(closed_chain(st, P, x, y));
      rep.lagrangians(x, y) = sw.weight_sq - mu * sw.weight * sw.weight;
      rep.total += rep.lagrangians(x, y);
      rep.constraint_value += sw.weight * sw.weight;
      rep.objective_sq += sw.weight_sq;
    }
    rep.local_traces.push_back(local_trace(st, P, x));
  }
  try {
    if (is_positive_operator(st.space(), -P, 1e-8)) {
      rep.bounds = lower_bounds(st, P);
      rep.bounds_valid = true;
    }
  } catch (const NonSymmetricError&) {
  }
  return rep;
}

double action_total(const SpaceTimeStructure& st, const Matrix& P, double mu) {
  double total = 0.0;
  for (int x = 0; x < st.points(); ++x)
    for (int y = 0; y < st.points(); ++y)
      total += lagrangian(closed_chain(st, P, x, y), mu);
  return total;
}

std::pair<double, double> action_weight_sums(const SpaceTimeStructure& st, const Matrix& P) {
  double sq = 0.0, con = 0.0;
  for (int x = 0; x < st.points(); ++x)
    for (int y = 0; y < st.points(); ++y) {
      SpectralWeightReport sw = spectral_weight_report(closed_chain(st, P, x, y));
      sq += sw.weight_sq;
      con += sw.weight * sw.weight;
    }
  return {sq, con};
}

double two_particle_action_surface(double alpha, double beta) {
  double ca = std::cosh(2.0 * alpha), cb = std::cosh(2.0 * beta);
  return 0.125 * (2.0 + (ca - cb) * (ca - cb)) * (ca + cb) * (ca + cb);
}

Matrix two_particle_projector(double alpha, double beta) {
  double sa = std::sinh(alpha), ca = std::cosh(alpha);
  double sb = std::sinh(beta), cb = std::cosh(beta);
  Matrix P = Matrix::Zero(4, 4);
  P(0, 0) = -sa * sa;
  P(0, 3) = sa * ca;
  P(1, 1) = cb * cb;
  P(1, 2) = -sb * cb;
  P(2, 1) = sb * cb;
  P(2, 2) = -sb * sb;
  P(3, 0) = -sa * ca;
  P(3, 3) = ca * ca;
  return P;
}

BoundsReport lower_bounds(const SpaceTimeStructure& st, const Matrix& P) {
  if (!is_positive_operator(st.space(), -P, 1e-8))
    throw std::invalid_argument("lower_bounds: -P must be positive");
  int n = st.spin_half();
  int m = st.points();
  double f = std::real(P.trace());
  BoundsReport rep;
  rep.global = std::pow(f, 4) / (256.0 * std::pow(n, 3) * std::pow(m, 3));
  for (int x = 0; x < m; ++x) {
    LocalBounds b;
    double t = std::abs(local_trace(st, P, x));
    b.llb1 = std::pow(t, 4) / (256.0 * std::pow(n, 3));
    std::vector<Complex> roots = char_poly_roots(closed_chain(st, P, x, x));
    double infsig = std::numeric_limits<double>::infinity();
    b.llb2_valid = true;
    for (const Complex& r : roots) {
      if (std::abs(std::imag(r)) > 1e-8) b.llb2_valid = false;
      infsig = std::min(infsig, std::abs(r));
    }
    b.llb2 = b.llb2_valid ? t * t * infsig / (4.0 * n) : 0.0;
    rep.local.push_back(b);
  }
  return rep;
}

}  // namespace ipvar
