#pragma once

#include <utility>
#include <vector>

#include "ipvar/core_space.hpp"

namespace ipvar {

/// Thrown when the QR iteration fails to deflate within the sweep budget.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& msg, double residual_)
      : std::runtime_error(msg), residual(residual_) {}
  double residual;
};

/// Roots of the characteristic polynomial of A together with the spectral
/// weights |A| = sum |lambda_j| and |A^2| = sum |lambda_j|^2.
struct SpectralWeightReport {
  std::vector<Complex> roots;
  double weight = 0.0;
  double weight_sq = 0.0;
};

/// Coefficients c_1..c_N of det(lambda - A) = lambda^N + c_1 lambda^{N-1} + ... + c_N,
/// computed by the Faddeev-LeVerrier recursion.
std::vector<Complex> char_poly_coeffs(const Matrix& A);

/// All N zeros of the characteristic polynomial, with multiplicity.
/// Works for defective (non-diagonalizable) input. Throws ConvergenceError
/// if the companion-matrix QR iteration does not deflate.
std::vector<Complex> char_poly_roots(const Matrix& A);

/// Spectral weight |A| = sum of |lambda_j| over the char-poly zeros.
double spectral_weight(const Matrix& A);

SpectralWeightReport spectral_weight_report(const Matrix& A);

/// For a positive operator A on a space of signature (p,q): its spectrum is
/// real and splits into q nonpositive and p nonnegative zeros. Returns the two
/// sorted groups (negatives, positives). Throws std::runtime_error if an
/// imaginary part exceeds tol (violated positivity precondition) or if the
/// sign split fails beyond tol.
std::pair<std::vector<double>, std::vector<double>> positive_spectrum_split(
    const SignatureSpace& space, const Matrix& A, double tol = 1e-8);

}  // namespace ipvar
