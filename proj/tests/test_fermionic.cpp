#include "doctest.h"

#include "ipvar/fermionic.hpp"
#include "ipvar/spectral.hpp"
#include "test_support.hpp"

using namespace ipvar;
using namespace ipvar::testing;

namespace {

Matrix column(std::initializer_list<Complex> vals) {
  Matrix W(static_cast<Eigen::Index>(vals.size()), 1);
  Eigen::Index i = 0;
  for (Complex v : vals) W(i++, 0) = v;
  return W;
}

}  // namespace

TEST_CASE("projector_from_frame: two-point one-particle examples") {
  SpaceTimeStructure st(2, 1);

  // Localized state.
  FermionicOperator op = projector_from_frame(st, column({0.0, 1.0, 0.0, 0.0}));
  Matrix expect = Matrix::Zero(4, 4);
  expect(1, 1) = 1.0;
  CHECK((op.matrix - expect).norm() < 1e-14);
  CHECK(op.f == 1);
  CHECK(is_projector(st.space(), op.matrix));

  // Evenly spread state; the construction normalizes the un-scaled frame too.
  op = projector_from_frame(st, column({0.0, 1.0, 0.0, 1.0}));
  Matrix spread = Matrix::Zero(4, 4);
  spread(1, 1) = spread(1, 3) = spread(3, 1) = spread(3, 3) = 0.5;
  CHECK((op.matrix - spread).norm() < 1e-14);
  CHECK(is_projector(st.space(), op.matrix));

  // A positive-norm column spans no negative definite subspace.
  CHECK_THROWS_AS(projector_from_frame(st, column({1.0, 0.0, 0.0, 0.0})), FrameError);
}

TEST_CASE("class_pf_from_frame") {
  SpaceTimeStructure st(2, 1);

  // Trace normalization of a scaled localized state.
  FermionicOperator op = class_pf_from_frame(st, column({0.0, 2.0, 0.0, 0.0}));
  Matrix expect = Matrix::Zero(4, 4);
  expect(1, 1) = 1.0;
  CHECK((op.matrix - expect).norm() < 1e-14);

  // Consistent with the projector construction on orthonormal frames.
  Matrix W = column({0.0, 1.0, 0.0, 1.0}) / std::sqrt(2.0);
  CHECK((class_pf_from_frame(st, W).matrix - projector_from_frame(st, W).matrix).norm() <
        1e-14);

  CHECK_THROWS_AS(class_pf_from_frame(st, column({1.0, 0.0, 0.0, 0.0})), FrameError);

  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    FermionicOperator r = random_operator(st, 2, OperatorMode::class_pf, trial);
    CHECK(is_positive_operator(st.space(), -r.matrix, 1e-10));
    CHECK(std::abs(r.matrix.trace() - Complex(2.0)) < 1e-10);
    CHECK(is_class_pf(st.space(), r.matrix, 2));
  }
}

TEST_CASE("closed chains of the two-point examples") {
  SpaceTimeStructure st(2, 1);
  FermionicOperator loc = projector_from_frame(st, column({0.0, 1.0, 0.0, 0.0}));
  Matrix A11 = closed_chain(st, loc.matrix, 0, 0);
  CHECK(std::abs(A11(1, 1) - Complex(1.0)) < 1e-14);
  CHECK(spectral_weight(A11) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(closed_chain(st, loc.matrix, 0, 1).norm() == 0.0);
  CHECK(closed_chain(st, loc.matrix, 1, 0).norm() == 0.0);
  CHECK(closed_chain(st, loc.matrix, 1, 1).norm() == 0.0);

  FermionicOperator spread = projector_from_frame(st, column({0.0, 1.0, 0.0, 1.0}));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      SpectralWeightReport rep = spectral_weight_report(closed_chain(st, spread.matrix, x, y));
      CHECK(rep.weight * rep.weight == doctest::Approx(1.0 / 16).epsilon(1e-12));
      CHECK(rep.weight_sq == doctest::Approx(1.0 / 16).epsilon(1e-12));
    }

  CHECK(closed_chain(st, Matrix::Zero(4, 4), 0, 1).norm() == 0.0);
}

TEST_CASE("is_projector / is_class_pf") {
  SpaceTimeStructure st(2, 1);
  Matrix P = Matrix::Zero(4, 4);
  P(1, 1) = 1.0;
  CHECK(is_projector(st.space(), P));
  Matrix spread = Matrix::Zero(4, 4);
  spread(1, 1) = spread(1, 3) = spread(3, 1) = spread(3, 3) = 0.5;
  CHECK(is_projector(st.space(), spread));
  CHECK_FALSE(is_class_pf(st.space(), Matrix::Zero(4, 4), 1));
}

TEST_CASE("random projector properties") {
  SpaceTimeStructure st(2, 1);
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    FermionicOperator op = random_operator(st, 2, OperatorMode::projector, trial);
    CHECK(is_projector(st.space(), op.matrix, 1e-10));
    CHECK(std::abs(op.matrix.trace() - Complex(2.0)) < 1e-10);

    // -P is positive: <u|(-P)u> >= 0 on random vectors.
    for (int k = 0; k < 10; ++k) {
      Vector u = random_vector(4, rng);
      CHECK(std::real(inner_product(st.space(), u, -(op.matrix * u))) > -1e-10);
    }

    // The compression to a point block stays positive.
    for (int x = 0; x < 2; ++x)
      CHECK(is_positive_operator(st.block_space(), -localize(st, op.matrix, x, x), 1e-9));
  }

  // Determinism in the seed.
  FermionicOperator a = random_operator(st, 1, OperatorMode::projector, 99);
  FermionicOperator b = random_operator(st, 1, OperatorMode::projector, 99);
  CHECK((a.matrix - b.matrix).norm() == 0.0);

  // Maximal and infeasible particle numbers.
  CHECK_NOTHROW(random_operator(st, 2, OperatorMode::projector, 1));
  CHECK_THROWS_AS(random_operator(st, 3, OperatorMode::projector, 1),
                  std::invalid_argument);
}

TEST_CASE("frame gauge freedom: unitary column mixes leave P unchanged") {
  SpaceTimeStructure st(2, 2);
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    FermionicOperator op = random_operator(st, 3, OperatorMode::projector, trial);
    Matrix G = random_matrix(3, rng);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ();
    FermionicOperator mixed = projector_from_frame(st, op.frame * Q);
    // Relative to the operator scale: ill-conditioned Gram matrices from the
    // sampler inflate ||P|| and with it the achievable agreement.
    CHECK((mixed.matrix - op.matrix).norm() <
          1e-12 * std::max(1.0, op.matrix.norm()));
  }
}
