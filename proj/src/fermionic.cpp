#include "ipvar/fermionic.hpp"

#include <cmath>
#include <random>

namespace ipvar {

std::string to_string(OperatorMode mode) {
  switch (mode) {
    case OperatorMode::projector:
      return "projector";
    case OperatorMode::class_pf:
      return "class_pf";
    case OperatorMode::rank_f_unnormalized:
      return "rank_f_unnormalized";
  }
  throw std::invalid_argument("unknown mode");
}

OperatorMode mode_from_string(const std::string& s) {
  if (s == "projector") return OperatorMode::projector;
  if (s == "class_pf") return OperatorMode::class_pf;
  if (s == "rank_f_unnormalized") return OperatorMode::rank_f_unnormalized;
  throw std::invalid_argument("unknown operator mode: " + s);
}

namespace {

void check_frame_dims(const SpaceTimeStructure& st, const Matrix& W) {
  if (W.rows() != st.dim() || W.cols() < 1)
    throw DimensionError("frame must be dim x f with f >= 1");
}

Matrix build_dense(const SignatureSpace& space, const Matrix& W, double c) {
  Matrix SW = space.signature_matrix() * W;  // P = -c W (S W)^dagger applied from right
  return -c * W * SW.adjoint();
}

}  // namespace

FermionicOperator projector_from_frame(const SpaceTimeStructure& st, const Matrix& W) {
  check_frame_dims(st, W);
  const SignatureSpace& space = st.space();
  Matrix G = -(W.adjoint() * space.signature_matrix() * W);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (G + G.adjoint()));
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  if (lmin <= 1e-12 * std::max(1.0, lmax))
    throw FrameError("projector_from_frame: Gram matrix not positive definite", lmin);
  // Principal Hermitian inverse square root of the Gram matrix.
  Matrix Ginvsqrt = es.eigenvectors() *
                    es.eigenvalues().array().rsqrt().matrix().asDiagonal().toDenseMatrix().cast<Complex>() *
                    es.eigenvectors().adjoint();
  FermionicOperator op;
  op.mode = OperatorMode::projector;
  op.f = static_cast<int>(W.cols());
  op.frame = W * Ginvsqrt;
  op.matrix = build_dense(space, op.frame, 1.0);
  return op;
}

FermionicOperator class_pf_from_frame(const SpaceTimeStructure& st, const Matrix& W) {
  check_frame_dims(st, W);
  const SignatureSpace& space = st.space();
  double t = std::real((W.adjoint() * space.signature_matrix() * W).trace());
  if (t >= 0.0)
    throw FrameError("class_pf_from_frame: Tr(W^dagger S W) must be negative", t);
  int f = static_cast<int>(W.cols());
  double c = static_cast<double>(f) / (-t);
  FermionicOperator op;
  op.mode = OperatorMode::class_pf;
  op.f = f;
  op.frame = std::sqrt(c) * W;
  op.matrix = build_dense(space, op.frame, 1.0);
  return op;
}

FermionicOperator unnormalized_from_frame(const SpaceTimeStructure& st, const Matrix& W) {
  check_frame_dims(st, W);
  FermionicOperator op;
  op.mode = OperatorMode::rank_f_unnormalized;
  op.f = static_cast<int>(W.cols());
  op.frame = W;
  op.matrix = build_dense(st.space(), W, 1.0);
  return op;
}

FermionicOperator operator_from_frame(const SpaceTimeStructure& st, const Matrix& W,
                                      OperatorMode mode) {
  switch (mode) {
    case OperatorMode::projector:
      return projector_from_frame(st, W);
    case OperatorMode::class_pf:
      return class_pf_from_frame(st, W);
    case OperatorMode::rank_f_unnormalized:
      return unnormalized_from_frame(st, W);
  }
  throw std::invalid_argument("unknown mode");
}

Matrix closed_chain(const SpaceTimeStructure& st, const Matrix& P, int x, int y) {
  return localize(st, P, x, y) * localize(st, P, y, x);
}

bool is_projector(const SignatureSpace& space, const Matrix& P, double tol) {
  double scale = std::max(1.0, P.norm());
  if ((P - adjoint(space, P)).norm() > tol * scale) return false;
  return (P - P * P).norm() <= tol * scale;
}

bool is_class_pf(const SignatureSpace& space, const Matrix& P, int f, double tol) {
  if (std::abs(P.trace() - Complex(f)) > tol * std::max(1.0, std::abs(P.trace())))
    return false;
  try {
    if (!is_positive_operator(space, -P, tol)) return false;
  } catch (const NonSymmetricError&) {
    return false;
  }
  Eigen::JacobiSVD<Matrix> svd(P);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-9 * sv[0]) ++rank;
  return rank <= f;
}

FermionicOperator random_operator(const SpaceTimeStructure& st, int f, OperatorMode mode,
                                  std::uint64_t seed) {
  if (f < 1) throw std::invalid_argument("random_operator: f >= 1 required");
  if (mode == OperatorMode::projector && f > st.spin_half() * st.points())
    throw std::invalid_argument(
        "random_operator: projector mode needs f <= n*m (no negative definite "
        "subspace of dimension f exists)");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&] {
    Matrix W(st.dim(), f);
    for (int j = 0; j < f; ++j)
      for (int i = 0; i < st.dim(); ++i) W(i, j) = Complex(gauss(rng), gauss(rng));
    return W;
  };
  // Reject-and-resample until the mode's precondition holds.
  for (int attempt = 0; attempt < 10000; ++attempt) {
    try {
      return operator_from_frame(st, draw(), mode);
    } catch (const FrameError&) {
    }
  }
  throw std::runtime_error("random_operator: sampling did not produce a feasible frame");
}

}  // namespace ipvar
