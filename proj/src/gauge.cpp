#include "ipvar/gauge.hpp"

#include <cmath>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

namespace ipvar {

Matrix GaugeTransformation::assemble(const SpaceTimeStructure& st) const {
  if (static_cast<int>(blocks.size()) != st.points())
    throw DimensionError("gauge: one block per point required");
  Matrix U = Matrix::Zero(st.dim(), st.dim());
  for (int x = 0; x < st.points(); ++x) {
    const Matrix& B = blocks[x];
    if (B.rows() != st.block_size() || B.cols() != st.block_size())
      throw DimensionError("gauge: block must be 2n x 2n");
    U.block(st.block_start(x), st.block_start(x), st.block_size(), st.block_size()) = B;
  }
  return U;
}

GaugeTransformation GaugeTransformation::identity(const SpaceTimeStructure& st) {
  GaugeTransformation g;
  for (int x = 0; x < st.points(); ++x)
    g.blocks.push_back(Matrix::Identity(st.block_size(), st.block_size()));
  return g;
}

std::vector<Matrix> gauge_algebra_basis(const SignatureSpace& block_space) {
  // X = S K with K anti-Hermitian gives X^dagger S = -S X. Enumerate the
  // standard anti-Hermitian basis: i E_jj, (E_jk - E_kj), i (E_jk + E_kj).
  int d = block_space.dim();
  Matrix S = block_space.signature_matrix();
  std::vector<Matrix> basis;
  basis.reserve(d * d);
  const Complex I(0.0, 1.0);
  for (int j = 0; j < d; ++j) {
    Matrix K = Matrix::Zero(d, d);
    K(j, j) = I;
    basis.push_back(S * K);
  }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Matrix K = Matrix::Zero(d, d);
      K(j, k) = 1.0;
      K(k, j) = -1.0;
      basis.push_back(S * K);
      K(j, k) = I;
      K(k, j) = I;
      basis.push_back(S * K);
    }
  return basis;
}

GaugeTransformation random_gauge(const SpaceTimeStructure& st, double spread,
                                 std::uint64_t seed) {
  if (spread < 0.0) throw std::invalid_argument("random_gauge: spread >= 0 required");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> basis = gauge_algebra_basis(st.block_space());
  GaugeTransformation g;
  for (int x = 0; x < st.points(); ++x) {
    Matrix X = Matrix::Zero(st.block_size(), st.block_size());
    for (const Matrix& B : basis) X += (spread * gauss(rng)) * B;
    g.blocks.push_back(spread == 0.0
                           ? Matrix::Identity(st.block_size(), st.block_size())
                           : X.exp().eval());
  }
  return g;
}

Matrix apply_gauge(const SpaceTimeStructure& st, const Matrix& P,
                   const GaugeTransformation& U) {
  if (P.rows() != st.dim() || P.cols() != st.dim())
    throw DimensionError("apply_gauge: P must be dim x dim");
  Matrix Ua = U.assemble(st);
  Matrix Uinv = adjoint(st.space(), Ua);  // unitary w.r.t. <.|.>: U^{-1} = U*
  return Ua * P * Uinv;
}

GaugeFixResult gauge_fix_hs_norm(const SpaceTimeStructure& st, const Matrix& P,
                                 GaugeFixOptions opts) {
  std::vector<Matrix> basis = gauge_algebra_basis(st.block_space());
  int nb = static_cast<int>(basis.size());
  int m = st.points();
  Matrix Q = P;
  double fval = Q.squaredNorm();
  double step = 0.25;
  int flat_iters = 0;
  GaugeFixResult res;
  for (res.iterations = 0; res.iterations < opts.max_iters; ++res.iterations) {
    // d/dt ||exp(tX) Q exp(-tX)||^2 at t=0 is 2 Re Tr(Q^dagger (XQ - QX)),
    // per point block and basis element.
    Eigen::MatrixXd grad(m, nb);
    double gnorm_inf = 0.0;
    for (int x = 0; x < m; ++x) {
      int s = st.block_start(x);
      int b = st.block_size();
      for (int i = 0; i < nb; ++i) {
        // Only rows/columns of the x-block are touched by a local generator.
        Complex tr = (Q.middleRows(s, b).adjoint() * (basis[i] * Q.middleRows(s, b))).trace() -
                     (Q.middleCols(s, b).adjoint() * (Q.middleCols(s, b) * basis[i])).trace();
        grad(x, i) = 2.0 * std::real(tr);
        gnorm_inf = std::max(gnorm_inf, std::abs(grad(x, i)));
      }
    }
    res.gradient_norm = gnorm_inf;
    if (gnorm_inf <= opts.tol) {
      res.converged = true;
      break;
    }
    double g2 = grad.squaredNorm();
    bool accepted = false;
    while (step > 1e-16) {
      GaugeTransformation U;
      for (int x = 0; x < m; ++x) {
        Matrix X = Matrix::Zero(st.block_size(), st.block_size());
        for (int i = 0; i < nb; ++i) X -= (step * grad(x, i)) * basis[i];
        U.blocks.push_back(X.exp().eval());
      }
      Matrix cand = apply_gauge(st, Q, U);
      double fc = cand.squaredNorm();
      if (fc <= fval - 1e-4 * step * g2) {
        Q = std::move(cand);
        flat_iters = (fval - fc <= 1e-14 * std::max(1.0, fval)) ? flat_iters + 1 : 0;
        fval = fc;
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    // A stalled line search or a flatlined norm means the iterate is
    // numerically stationary even if the gradient has not hit tol.
    if (!accepted || flat_iters >= 10) {
      res.converged = true;
      break;
    }
  }
  res.fixed = std::move(Q);
  res.norm = std::sqrt(fval);
  return res;
}

bool check_homogeneous(const SpaceTimeStructure& st, const Matrix& P,
                       const std::vector<int>& sigma, const GaugeTransformation& U,
                       double tol) {
  int m = st.points();
  if (static_cast<int>(sigma.size()) != m)
    throw std::invalid_argument("check_homogeneous: sigma must have m entries");
  std::vector<bool> seen(m, false);
  for (int x : sigma) {
    if (x < 0 || x >= m || seen[x])
      throw std::invalid_argument("check_homogeneous: sigma must be a bijection");
    seen[x] = true;
  }
  SignatureSpace bs = st.block_space();
  double scale = std::max(1.0, P.norm());
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      Matrix lhs = localize(st, P, sigma[x], sigma[y]);
      Matrix rhs = U.blocks.at(x) * localize(st, P, x, y) * adjoint(bs, U.blocks.at(y));
      if ((lhs - rhs).norm() > tol * scale) return false;
    }
  }
  return true;
}

}  // namespace ipvar
