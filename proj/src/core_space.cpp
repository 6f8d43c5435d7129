#include "ipvar/core_space.hpp"

#include <cmath>

namespace ipvar {

SignatureSpace::SignatureSpace(Eigen::VectorXd signature)
    : signature_(std::move(signature)), positives_(0) {
  if (signature_.size() == 0) throw DimensionError("signature must be non-empty");
  for (Eigen::Index i = 0; i < signature_.size(); ++i) {
    double s = signature_[i];
    if (s != 1.0 && s != -1.0)
      throw std::invalid_argument("signature entries must be exactly +1 or -1");
    if (s > 0) ++positives_;
  }
}

Matrix SignatureSpace::signature_matrix() const {
  return signature_.cast<Complex>().asDiagonal();
}

SpaceTimeStructure::SpaceTimeStructure(int m, int n)
    : m_(m), n_(n), space_([m, n] {
        if (m < 1 || n < 1) throw std::invalid_argument("need m >= 1 and n >= 1");
        Eigen::VectorXd sig(2 * n * m);
        for (int i = 0; i < 2 * n * m; ++i) sig[i] = (i % 2 == 0) ? 1.0 : -1.0;
        return SignatureSpace(sig);
      }()) {}

int SpaceTimeStructure::block_start(int x) const {
  if (x < 0 || x >= m_) throw DimensionError("point index out of range");
  return 2 * n_ * x;
}

SignatureSpace SpaceTimeStructure::block_space() const {
  Eigen::VectorXd sig(2 * n_);
  for (int i = 0; i < 2 * n_; ++i) sig[i] = (i % 2 == 0) ? 1.0 : -1.0;
  return SignatureSpace(sig);
}

Matrix SpaceTimeStructure::point_projector(int x) const {
  Matrix E = Matrix::Zero(dim(), dim());
  int s = block_start(x);
  for (int i = 0; i < block_size(); ++i) E(s + i, s + i) = 1.0;
  return E;
}

Complex inner_product(const SignatureSpace& space, const Vector& u, const Vector& v) {
  if (u.size() != space.dim() || v.size() != space.dim())
    throw DimensionError("inner_product: vector length must equal dim");
  Complex sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    sum += std::conj(u[i]) * space.signature()[i] * v[i];
  return sum;
}

Matrix adjoint(const SignatureSpace& space, const Matrix& A) {
  if (A.rows() != space.dim() || A.cols() != space.dim())
    throw DimensionError("adjoint: matrix must be dim x dim");
  const Eigen::VectorXd& s = space.signature();
  Matrix R = A.adjoint();
  // S A^dagger S with diagonal S applied entrywise.
  for (Eigen::Index i = 0; i < R.rows(); ++i)
    for (Eigen::Index j = 0; j < R.cols(); ++j) R(i, j) *= s[i] * s[j];
  return R;
}

bool is_symmetric(const SignatureSpace& space, const Matrix& A, double tol) {
  Matrix diff = A - adjoint(space, A);
  return diff.norm() <= tol * std::max(1.0, A.norm());
}

bool is_positive_operator(const SignatureSpace& space, const Matrix& A, double tol) {
  if (!is_symmetric(space, A, std::max(tol, kDefaultTol) * 100))
    throw NonSymmetricError("is_positive_operator: operator is not symmetric");
  Matrix SA = space.signature_matrix() * A;
  // SA is Hermitian up to the symmetry tolerance; symmetrize before solving.
  Matrix H = 0.5 * (SA + SA.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Matrix localize(const SpaceTimeStructure& st, const Matrix& A, int x, int y) {
  if (A.rows() != st.dim() || A.cols() != st.dim())
    throw DimensionError("localize: matrix must be dim x dim");
  return A.block(st.block_start(x), st.block_start(y), st.block_size(), st.block_size());
}

Complex local_trace(const SpaceTimeStructure& st, const Matrix& P, int x) {
  if (P.rows() != st.dim() || P.cols() != st.dim())
    throw DimensionError("local_trace: matrix must be dim x dim");
  return localize(st, P, x, x).trace();
}

}  // namespace ipvar
