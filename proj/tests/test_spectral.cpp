#include "doctest.h"

#include "ipvar/fermionic.hpp"
#include "ipvar/spectral.hpp"
#include "test_support.hpp"

using namespace ipvar;
using namespace ipvar::testing;

TEST_CASE("char_poly_roots: pinned small cases") {
  Matrix A(2, 2);
  A << 1.0, 1.0, -1.0, -1.0;  // nilpotent
  auto roots = char_poly_roots(A);
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0]) == 0.0);
  CHECK(std::abs(roots[1]) == 0.0);
  CHECK(spectral_weight(A) == 0.0);

  A << 0.0, 1.0, -1.0, 0.0;
  roots = char_poly_roots(A);
  CHECK(multiset_distance(roots, {Complex(0, 1), Complex(0, -1)}) < 1e-14);

  CHECK(spectral_weight(Matrix::Zero(3, 3)) == 0.0);

  Matrix one(1, 1);
  one << Complex(2.0, -3.0);
  roots = char_poly_roots(one);
  CHECK(roots[0] == Complex(2.0, -3.0));
}

TEST_CASE("char_poly_roots: Vieta cross-check on random matrices") {
  std::mt19937_64 rng(23);
  for (int n : {2, 3, 4, 6, 8}) {
    for (int trial = 0; trial < 40; ++trial) {
      Matrix A = random_matrix(n, rng);
      auto roots = char_poly_roots(A);
      REQUIRE(static_cast<int>(roots.size()) == n);
      Complex sum = 0.0, prod = 1.0;
      for (const Complex& r : roots) {
        sum += r;
        prod *= r;
      }
      double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
      CHECK(std::abs(sum - A.trace()) < 1e-9 * scale);
      CHECK(std::abs(prod - A.determinant()) < 1e-9 * std::pow(scale, n));
    }
  }
}

TEST_CASE("char_poly_roots agree with closed-form solvers up to degree 4") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    Matrix A2 = random_matrix(2, rng);
    auto c2 = char_poly_coeffs(A2);
    CHECK(multiset_distance(char_poly_roots(A2), quadratic_oracle(c2[0], c2[1])) < 1e-9);

    Matrix A3 = random_matrix(3, rng);
    auto c3 = char_poly_coeffs(A3);
    CHECK(multiset_distance(char_poly_roots(A3), cubic_oracle(c3[0], c3[1], c3[2])) < 1e-8);

    Matrix A4 = random_matrix(4, rng);
    auto c4 = char_poly_coeffs(A4);
    CHECK(multiset_distance(char_poly_roots(A4),
                            quartic_oracle(c4[0], c4[1], c4[2], c4[3])) < 1e-7);
  }
}

TEST_CASE("similarity invariance of the root multiset") {
  std::mt19937_64 rng(31);
  int done = 0;
  while (done < 30) {
    Matrix A = random_matrix(4, rng);
    Matrix T = random_matrix(4, rng);
    Eigen::JacobiSVD<Matrix> svd(T);
    double cond = svd.singularValues()(0) / svd.singularValues()(3);
    if (!(cond < 1e3)) continue;
    Matrix B = T * A * T.inverse();
    CHECK(multiset_distance(char_poly_roots(A), char_poly_roots(B)) < 1e-7);
    ++done;
  }
}

TEST_CASE("symmetric matrices: non-real roots come in conjugate pairs") {
  SpaceTimeStructure st(2, 1);
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    Matrix A = random_symmetric(st.space(), rng);
    auto roots = char_poly_roots(A);
    std::vector<Complex> conj;
    for (const Complex& r : roots) conj.push_back(std::conj(r));
    CHECK(multiset_distance(roots, conj) < 1e-8 * std::max(1.0, A.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("spectral weights of scalar matrices") {
  // k*I has one root of multiplicity 2n; the companion QR resolves such a
  // cluster only to ~eps^(1/2n), though errors cancel to first order in the
  // summed weights. Tolerances reflect that.
  for (int n : {1, 2, 4}) {
    double k = 1.7;
    Matrix A = k * Matrix::Identity(2 * n, 2 * n);
    SpectralWeightReport rep = spectral_weight_report(A);
    double tol = n == 1 ? 1e-12 : (n == 2 ? 1e-6 : 1e-2);
    CHECK(rep.weight_sq == doctest::Approx(2 * n * k * k).epsilon(tol));
    CHECK(rep.weight * rep.weight == doctest::Approx(4.0 * n * n * k * k).epsilon(tol));
  }
}

TEST_CASE("weight_sq matches the spectral weight of A^2") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    Matrix A = random_matrix(4, rng);
    SpectralWeightReport rep = spectral_weight_report(A);
    CHECK(rep.weight_sq ==
          doctest::Approx(spectral_weight(A * A)).epsilon(1e-8));
  }
}

TEST_CASE("positive_spectrum_split") {
  Eigen::VectorXd sig(2);
  sig << 1.0, -1.0;
  SignatureSpace s(sig);

  Matrix A(2, 2);
  A << 1.0, 0.0, 0.0, -1.0;
  auto [neg, pos] = positive_spectrum_split(s, A);
  REQUIRE(neg.size() == 1);
  REQUIRE(pos.size() == 1);
  CHECK(neg[0] == doctest::Approx(-1.0));
  CHECK(pos[0] == doctest::Approx(1.0));

  auto [zn, zp] = positive_spectrum_split(s, Matrix::Zero(2, 2));
  CHECK(zn == std::vector<double>{0.0});
  CHECK(zp == std::vector<double>{0.0});

  // Non-real spectrum signals the violated precondition.
  Matrix rot(2, 2);
  rot << 0.0, 1.0, -1.0, 0.0;
  CHECK_THROWS_AS(positive_spectrum_split(s, rot), std::runtime_error);
}

TEST_CASE("-P(x,x) of a class P^f operator splits n/n on the point block") {
  for (auto [n, m, f] : {std::tuple{1, 2, 1}, {2, 2, 2}}) {
    SpaceTimeStructure st(m, n);
    SignatureSpace block = st.block_space();
    for (int trial = 0; trial < 50; ++trial) {
      FermionicOperator op =
          random_operator(st, f, OperatorMode::class_pf, 1000 * n + trial);
      for (int x = 0; x < m; ++x) {
        Matrix T = -localize(st, op.matrix, x, x);
        auto [negs, poss] = positive_spectrum_split(block, T, 1e-8);
        CHECK(static_cast<int>(negs.size()) == n);
        CHECK(static_cast<int>(poss.size()) == n);
      }
    }
  }
}

TEST_CASE("closed chains of x,y and y,x share the root multiset") {
  SpaceTimeStructure st(3, 1);
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix P = random_matrix(st.dim(), rng);
    for (int x = 0; x < 3; ++x)
      for (int y = x + 1; y < 3; ++y) {
        auto rx = char_poly_roots(closed_chain(st, P, x, y));
        auto ry = char_poly_roots(closed_chain(st, P, y, x));
        double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
        CHECK(multiset_distance(rx, ry) < 1e-8 * scale * scale);
        CHECK(spectral_weight(closed_chain(st, P, x, y)) ==
              doctest::Approx(spectral_weight(closed_chain(st, P, y, x))).epsilon(1e-8));
      }
  }
}
