#pragma once

#include <cstdint>
#include <string>

#include "ipvar/core_space.hpp"

namespace ipvar {

enum class OperatorMode { projector, class_pf, rank_f_unnormalized };

std::string to_string(OperatorMode mode);
OperatorMode mode_from_string(const std::string& s);

/// Thrown when a spanning frame cannot produce an operator of the requested
/// mode (Gram matrix not negative definite, trace normalization impossible).
struct FrameError : std::invalid_argument {
  FrameError(const std::string& msg, double smallest_gram_eigenvalue_)
      : std::invalid_argument(msg),
        smallest_gram_eigenvalue(smallest_gram_eigenvalue_) {}
  double smallest_gram_eigenvalue;
};

/// An operator P = -c W W^dagger S given by a spanning frame W (dim x f).
/// For projector mode the stored frame is already Gram-orthonormalized.
struct FermionicOperator {
  OperatorMode mode = OperatorMode::projector;
  int f = 0;
  Matrix frame;   // dim x f, columns span the image of P
  Matrix matrix;  // dense dim x dim representation
};

/// P = -W' W'^dagger S with W' = W G^{-1/2}, G = -W^dagger S W. Requires G
/// Hermitian positive definite (the columns span a negative definite subspace).
FermionicOperator projector_from_frame(const SpaceTimeStructure& st, const Matrix& W);

/// P = -c W W^dagger S with c = f / (-Tr(W^dagger S W)); requires the trace to
/// be negative. Tr P = f, -P positive, rank <= f.
FermionicOperator class_pf_from_frame(const SpaceTimeStructure& st, const Matrix& W);

/// P = -W W^dagger S with no normalization; -P positive, rank <= f.
FermionicOperator unnormalized_from_frame(const SpaceTimeStructure& st, const Matrix& W);

FermionicOperator operator_from_frame(const SpaceTimeStructure& st, const Matrix& W,
                                      OperatorMode mode);

/// Closed chain A_xy = P(x,y) P(y,x) as a 2n x 2n map on E_x(H).
Matrix closed_chain(const SpaceTimeStructure& st, const Matrix& P, int x, int y);

/// P* = P = P^2 within tol, and rank f detected by singular value threshold.
bool is_projector(const SignatureSpace& space, const Matrix& P, double tol = kDefaultTol);

/// -P positive, Tr P = f, rank <= f.
bool is_class_pf(const SignatureSpace& space, const Matrix& P, int f,
                 double tol = kDefaultTol);

/// Seeded random operator of the given mode. Frame entries are i.i.d. complex
/// Gaussian; projector mode rejects and resamples until the Gram matrix is
/// negative definite (one sampling choice among many, not a canonical
/// distribution over projectors). Requires f <= n*m in projector mode.
FermionicOperator random_operator(const SpaceTimeStructure& st, int f, OperatorMode mode,
                                  std::uint64_t seed);

}  // namespace ipvar
