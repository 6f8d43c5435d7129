#pragma once

#include <cstdint>
#include <vector>

#include "ipvar/core_space.hpp"

namespace ipvar {

/// A block-diagonal unitary w.r.t. <.|.>: one 2n x 2n block per point, each
/// satisfying U(x)^dagger S_x U(x) = S_x (an element of U(n,n)).
struct GaugeTransformation {
  std::vector<Matrix> blocks;

  Matrix assemble(const SpaceTimeStructure& st) const;
  static GaugeTransformation identity(const SpaceTimeStructure& st);
};

/// Real basis of the Lie algebra {X : X^dagger S = -S X} of the block's
/// isometry group; dimension (2n)^2.
std::vector<Matrix> gauge_algebra_basis(const SignatureSpace& block_space);

/// Blocks exp(X) with X a Gaussian draw in the Lie algebra, scaled by spread.
/// Deterministic in seed; spread = 0 gives the identity.
GaugeTransformation random_gauge(const SpaceTimeStructure& st, double spread,
                                 std::uint64_t seed);

/// P -> U P U^{-1}. Uses U^{-1} = S U^dagger S.
Matrix apply_gauge(const SpaceTimeStructure& st, const Matrix& P,
                   const GaugeTransformation& U);

struct GaugeFixOptions {
  double tol = 1e-8;
  int max_iters = 5000;
};

struct GaugeFixResult {
  Matrix fixed;
  double norm = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Finds a (locally) minimal Hilbert-Schmidt norm representative of the gauge
/// orbit of P, by gradient descent in Lie-algebra coordinates with Armijo
/// backtracking.
GaugeFixResult gauge_fix_hs_norm(const SpaceTimeStructure& st, const Matrix& P,
                                 GaugeFixOptions opts = {});

/// Checks the supplied homogeneity witness (sigma, U): blocks must satisfy
/// P(sigma(x), sigma(y)) = U(x) P(x,y) U(y)^{-1} for all x,y, where U(x) is
/// read as the identification E_x(H) -> E_{sigma(x)}(H). Does not search for
/// a witness.
bool check_homogeneous(const SpaceTimeStructure& st, const Matrix& P,
                       const std::vector<int>& sigma, const GaugeTransformation& U,
                       double tol = kDefaultTol);

}  // namespace ipvar
