#pragma once

#include <vector>

#include "ipvar/core_space.hpp"

namespace ipvar {

/// Critical Lagrange-multiplier value 1/2n, below which the Lagrangian is
/// nonnegative on closed chains.
inline double critical_mu(int n) { return 1.0 / (2.0 * n); }

/// Per-point lower bounds on L[A_xx] in terms of the local trace.
struct LocalBounds {
  double llb1 = 0.0;       // |Tr(E_x P)|^4 / (256 n^3)
  double llb2 = 0.0;       // |Tr(E_x P)|^2 * inf sigma(A_xx) / (4n)
  bool llb2_valid = true;  // false if A_xx roots had imaginary parts beyond 1e-8
};

struct BoundsReport {
  std::vector<LocalBounds> local;
  double global = 0.0;  // f^4 / (256 n^3 m^3)
};

struct ActionReport {
  double mu = 0.0;
  Eigen::MatrixXd lagrangians;  // m x m, L_mu[A_xy]
  double total = 0.0;
  double constraint_value = 0.0;  // sum |A_xy|^2
  double objective_sq = 0.0;      // sum |A_xy^2|, the constrained objective
  std::vector<Complex> local_traces;
  bool bounds_valid = false;  // bounds require -P positive
  BoundsReport bounds;
};

/// L_mu[A] = |A^2| - mu |A|^2, evaluated through the char-poly roots of A.
double lagrangian(const Matrix& A, double mu);

/// (1/4n) sum_{i,j} (|lambda_i| - |lambda_j|)^2; equals lagrangian(A, 1/2n).
double critical_lagrangian_pairsum(const Matrix& A);

/// Full evaluation over all point pairs.
ActionReport action(const SpaceTimeStructure& st, const Matrix& P, double mu);

/// Just the total S_mu[P]; cheaper inner loop for the optimizer.
double action_total(const SpaceTimeStructure& st, const Matrix& P, double mu);

/// Both spectral-weight sums at once: (sum |A_xy^2|, sum |A_xy|^2).
std::pair<double, double> action_weight_sums(const SpaceTimeStructure& st, const Matrix& P);

/// Closed-form action surface of the explicit two-point, two-particle family:
/// (1/8) (2 + (cosh 2a - cosh 2b)^2) (cosh 2a + cosh 2b)^2.
double two_particle_action_surface(double alpha, double beta);

/// The explicit projector realizing that surface (m=2, n=1, f=2).
Matrix two_particle_projector(double alpha, double beta);

/// Local trace lower bounds and the global bound f^4/(256 n^3 m^3).
/// Requires -P positive.
BoundsReport lower_bounds(const SpaceTimeStructure& st, const Matrix& P);

}  // namespace ipvar
