#include "ipvar/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace ipvar {

namespace {

constexpr double kDeflateEps = 1e-12;
constexpr int kMaxSweeps = 200;

// Roots of lambda^2 + b lambda + c, stable against cancellation.
std::pair<Complex, Complex> quadratic_roots(Complex b, Complex c) {
  Complex disc = std::sqrt(b * b - 4.0 * c);
  // Pick the sign that avoids cancellation in -b -/+ disc.
  Complex q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc)
                                                      : -0.5 * (b - disc);
  if (q == Complex(0.0)) return {Complex(0.0), Complex(0.0)};
  return {q, c / q};
}

// Complex Givens rotation [[c, s],[-conj(s), c]] with c real that maps
// (a,b) -> (r,0).
void make_givens(Complex a, Complex b, double& c, Complex& s) {
  if (b == Complex(0.0)) {
    c = 1.0;
    s = Complex(0.0);
    return;
  }
  if (a == Complex(0.0)) {
    c = 0.0;
    s = Complex(1.0);
    return;
  }
  double r = std::hypot(std::abs(a), std::abs(b));
  c = std::abs(a) / r;
  s = a * std::conj(b) / (r * std::abs(a));
}

// Shifted QR iteration on an upper Hessenberg matrix, in place.
// Appends the eigenvalues to out. Throws ConvergenceError on sweep exhaustion.
void hessenberg_qr(Matrix& H, std::vector<Complex>& out) {
  int n = static_cast<int>(H.rows());
  int hi = n - 1;
  int sweeps_since_deflation = 0;
  while (hi >= 0) {
    // Find the start of the active block and zero out negligible subdiagonals.
    int lo = hi;
    while (lo > 0) {
      double sub = std::abs(H(lo, lo - 1));
      if (sub <= kDeflateEps * (std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo)))) {
        H(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      out.push_back(H(hi, hi));
      --hi;
      sweeps_since_deflation = 0;
      continue;
    }
    if (lo == hi - 1) {
      Complex b = -(H(lo, lo) + H(hi, hi));
      Complex c = H(lo, lo) * H(hi, hi) - H(lo, hi) * H(hi, lo);
      auto [r1, r2] = quadratic_roots(b, c);
      out.push_back(r1);
      out.push_back(r2);
      hi -= 2;
      sweeps_since_deflation = 0;
      continue;
    }
    if (++sweeps_since_deflation > kMaxSweeps) {
      throw ConvergenceError("char_poly_roots: QR iteration did not converge",
                             std::abs(H(hi, hi - 1)));
    }

    Complex shift;
    if (sweeps_since_deflation % 12 == 0) {
      // Exceptional shift to break symmetric stagnation.
      shift = Complex(std::abs(H(hi, hi - 1)) + std::abs(H(hi - 1, hi - 2)), 0.0) * 0.75;
    } else {
      // Wilkinson shift: eigenvalue of the trailing 2x2 closest to H(hi,hi).
      Complex t = 0.5 * (H(hi - 1, hi - 1) + H(hi, hi));
      Complex d = H(hi - 1, hi - 1) * H(hi, hi) - H(hi - 1, hi) * H(hi, hi - 1);
      Complex disc = std::sqrt(t * t - d);
      Complex l1 = t + disc, l2 = t - disc;
      shift = (std::abs(l1 - H(hi, hi)) < std::abs(l2 - H(hi, hi))) ? l1 : l2;
    }

    for (int i = lo; i <= hi; ++i) H(i, i) -= shift;
    std::vector<double> cs(hi - lo);
    std::vector<Complex> ss(hi - lo);
    for (int i = lo; i < hi; ++i) {
      double c;
      Complex s;
      make_givens(H(i, i), H(i + 1, i), c, s);
      cs[i - lo] = c;
      ss[i - lo] = s;
      for (int j = i; j <= hi; ++j) {
        Complex t1 = H(i, j), t2 = H(i + 1, j);
        H(i, j) = c * t1 + s * t2;
        H(i + 1, j) = -std::conj(s) * t1 + c * t2;
      }
    }
    for (int i = lo; i < hi; ++i) {
      double c = cs[i - lo];
      Complex s = ss[i - lo];
      int rmax = std::min(i + 1, hi);
      for (int r = lo; r <= rmax; ++r) {
        Complex t1 = H(r, i), t2 = H(r, i + 1);
        H(r, i) = c * t1 + std::conj(s) * t2;
        H(r, i + 1) = -s * t1 + c * t2;
      }
    }
    for (int i = lo; i <= hi; ++i) H(i, i) += shift;
  }
}

}  // namespace

std::vector<Complex> char_poly_coeffs(const Matrix& A) {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw DimensionError("char_poly_coeffs: square matrix required");
  int n = static_cast<int>(A.rows());
  std::vector<Complex> c(n);
  Matrix M = A;
  c[0] = -M.trace();
  for (int k = 2; k <= n; ++k) {
    M.diagonal().array() += c[k - 2];
    M = A * M;
    c[k - 1] = -M.trace() / static_cast<double>(k);
  }
  return c;
}

std::vector<Complex> char_poly_roots(const Matrix& A) {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw DimensionError("char_poly_roots: square matrix required");
  int n = static_cast<int>(A.rows());
  if (n == 1) return {A(0, 0)};

  // Scale to unit magnitude before forming the companion matrix; roots scale back.
  double scale = A.cwiseAbs().maxCoeff();
  if (scale == 0.0) return std::vector<Complex>(n, Complex(0.0));
  std::vector<Complex> c = char_poly_coeffs(A / scale);

  std::vector<Complex> roots;
  roots.reserve(n);
  // Negligible constant terms give zero roots; deflating them up front keeps
  // zero clusters exact instead of smearing them to O(eps^(1/k)) by the QR.
  double cmax = 1.0;
  for (const Complex& ck : c) cmax = std::max(cmax, std::abs(ck));
  double zero_eps = 1e-13 * cmax;
  int deg = n;
  while (deg > 0 && std::abs(c[deg - 1]) <= zero_eps) {
    roots.push_back(0.0);
    --deg;
  }
  if (deg == 1) {
    roots.push_back(-c[0]);
  } else if (deg == 2) {
    auto [r1, r2] = quadratic_roots(c[0], c[1]);
    roots.push_back(r1);
    roots.push_back(r2);
  } else if (deg > 2) {
    Matrix comp = Matrix::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[deg - 1 - i];
    hessenberg_qr(comp, roots);
  }
  for (auto& r : roots) r *= scale;
  return roots;
}

double spectral_weight(const Matrix& A) {
  double w = 0.0;
  for (const Complex& r : char_poly_roots(A)) w += std::abs(r);
  return w;
}

SpectralWeightReport spectral_weight_report(const Matrix& A) {
  SpectralWeightReport rep;
  rep.roots = char_poly_roots(A);
  for (const Complex& r : rep.roots) {
    double a = std::abs(r);
    rep.weight += a;
    rep.weight_sq += a * a;
  }
  return rep;
}

std::pair<std::vector<double>, std::vector<double>> positive_spectrum_split(
    const SignatureSpace& space, const Matrix& A, double tol) {
  std::vector<Complex> roots = char_poly_roots(A);
  std::vector<double> re;
  re.reserve(roots.size());
  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (const Complex& r : roots) {
    if (std::abs(std::imag(r)) > tol * scale)
      throw std::runtime_error(
          "positive_spectrum_split: non-real spectrum, positivity precondition violated");
    re.push_back(std::real(r));
  }
  std::sort(re.begin(), re.end());
  int q = space.negatives();
  std::vector<double> negatives(re.begin(), re.begin() + q);
  std::vector<double> positives(re.begin() + q, re.end());
  if ((!negatives.empty() && negatives.back() > tol * scale) ||
      (!positives.empty() && positives.front() < -tol * scale))
    throw std::runtime_error("positive_spectrum_split: sign split failed");
  return {negatives, positives};
}

}  // namespace ipvar
