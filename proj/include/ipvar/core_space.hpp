#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ipvar {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-10;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonSymmetricError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A finite-dimensional complex space carrying the indefinite product
/// <u|v> = (u|Sv), with S a diagonal matrix of +/-1 entries.
class SignatureSpace {
 public:
  explicit SignatureSpace(Eigen::VectorXd signature);

  int dim() const { return static_cast<int>(signature_.size()); }
  const Eigen::VectorXd& signature() const { return signature_; }
  Matrix signature_matrix() const;

  /// Maximal dimension of a positive definite subspace (count of +1 entries).
  int positives() const { return positives_; }
  int negatives() const { return dim() - positives_; }

 private:
  Eigen::VectorXd signature_;
  int positives_;
};

/// Discrete space-time: m points, each carrying a 2n-dimensional block of
/// signature (n,n). Blocks are contiguous; within a block the signature
/// pattern is (+1,-1) repeated n times.
class SpaceTimeStructure {
 public:
  SpaceTimeStructure(int m, int n);

  int points() const { return m_; }
  int spin_half() const { return n_; }
  int block_size() const { return 2 * n_; }
  int dim() const { return 2 * n_ * m_; }
  const SignatureSpace& space() const { return space_; }

  int block_start(int x) const;

  /// The signature space of a single point block (dimension 2n, signature (n,n)).
  SignatureSpace block_space() const;

  /// E_x materialized as a dim x dim diagonal 0/1 projector.
  Matrix point_projector(int x) const;

 private:
  int m_;
  int n_;
  SignatureSpace space_;
};

/// <u|v> = (u|Sv), conjugate-linear in the first argument.
Complex inner_product(const SignatureSpace& space, const Vector& u, const Vector& v);

/// A* = S A^dagger S.
Matrix adjoint(const SignatureSpace& space, const Matrix& A);

/// True iff ||A - A*|| <= tol * max(1, ||A||) (Frobenius norms).
bool is_symmetric(const SignatureSpace& space, const Matrix& A, double tol = kDefaultTol);

/// True iff <u|Au> >= 0 for all u, checked as: the Hermitian matrix SA has all
/// eigenvalues >= -tol. Throws NonSymmetricError if A is not symmetric.
bool is_positive_operator(const SignatureSpace& space, const Matrix& A,
                          double tol = kDefaultTol);

/// The (x,y) block of A, a 2n x 2n matrix mapping E_y(H) -> E_x(H).
Matrix localize(const SpaceTimeStructure& st, const Matrix& A, int x, int y);

/// Tr(E_x P); the local traces sum to Tr(P).
Complex local_trace(const SpaceTimeStructure& st, const Matrix& P, int x);

}  // namespace ipvar
