#include "doctest.h"

#include "ipvar/action.hpp"
#include "ipvar/fermionic.hpp"
#include "ipvar/transforms.hpp"
#include "test_support.hpp"

using namespace ipvar;
using namespace ipvar::testing;

TEST_CASE("spreading the localized one-particle operator") {
  SpaceTimeStructure st(2, 1);
  Matrix P = Matrix::Zero(4, 4);
  P(1, 1) = 1.0;  // all weight at point 0
  double before = action_total(st, P, 0.5);
  CHECK(before == doctest::Approx(0.5).epsilon(1e-12));

  SpreadResult r = spread_point(st, P, 0.5);
  CHECK(r.spread_index == 0);
  CHECK(r.structure.points() == 3);
  double after = action_total(r.structure, r.operator_matrix, 0.5);
  // The guaranteed factor is 1 - 3/8 (bound 5/16); halving the localized point
  // actually does better: four pairs each contribute L[P_xx^2/4] = 1/32.
  CHECK(after <= (1.0 - 3.0 / (4.0 * 2)) * before + 1e-12);
  CHECK(after == doctest::Approx(0.125).epsilon(1e-10));

  // Exact kernel bookkeeping: splitting point b off x halves the corner and
  // scales the cross terms by 1/sqrt(2).
  const auto& ns = r.structure;
  int x = r.spread_index, b = 2;
  Matrix Pxx = localize(st, P, x, x);
  CHECK((localize(ns, r.operator_matrix, x, x) - 0.5 * Pxx).cwiseAbs().maxCoeff() == 0.0);
  CHECK((localize(ns, r.operator_matrix, b, b) - 0.5 * Pxx).cwiseAbs().maxCoeff() == 0.0);
  CHECK((localize(ns, r.operator_matrix, x, b) - 0.5 * Pxx).cwiseAbs().maxCoeff() == 0.0);
  for (int y = 0; y < 2; ++y) {
    if (y == x) continue;
    Matrix Pxy = localize(st, P, x, y);
    CHECK((localize(ns, r.operator_matrix, b, y) - Pxy / std::sqrt(2.0))
              .cwiseAbs().maxCoeff() == 0.0);
    CHECK((localize(ns, r.operator_matrix, y, b) -
           localize(st, P, y, x) / std::sqrt(2.0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((localize(ns, r.operator_matrix, x, y) - Pxy / std::sqrt(2.0))
              .cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("spreading preserves the projector property") {
  for (int m : {2, 3, 4}) {
    SpaceTimeStructure st(m, 1);
    for (int trial = 0; trial < 34; ++trial) {
      FermionicOperator op = random_operator(st, 1, OperatorMode::projector, 50 + trial);
      SpreadResult r = spread_point(st, op.matrix, 0.5);
      CHECK(is_projector(r.structure.space(), r.operator_matrix, 1e-9));
      double before = action_total(st, op.matrix, 0.5);
      double after = action_total(r.structure, r.operator_matrix, 0.5);
      CHECK(after <= (1.0 - 3.0 / (4.0 * m)) * before + 1e-9);
    }
  }
}

TEST_CASE("repeated spreads keep shrinking the action") {
  SpaceTimeStructure st(2, 1);
  Matrix P = Matrix::Zero(4, 4);
  P(1, 1) = 1.0;
  double prev = action_total(st, P, 0.5);
  SpaceTimeStructure cur = st;
  for (int step = 0; step < 4; ++step) {
    SpreadResult r = spread_point(cur, P, 0.5);
    cur = r.structure;
    P = r.operator_matrix;
    double now = action_total(cur, P, 0.5);
    CHECK(now <= (1.0 - 3.0 / (4.0 * (cur.points() - 1))) * prev + 1e-10);
    CHECK(is_projector(cur.space(), P, 1e-9));
    prev = now;
  }
}

TEST_CASE("spreading the zero operator") {
  SpaceTimeStructure st(2, 1);
  SpreadResult r = spread_point(st, Matrix::Zero(4, 4), 0.5);
  CHECK(r.operator_matrix.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.structure.points() == 3);
}

TEST_CASE("restriction to the complement of a point") {
  // Removing one point of the localized two-particle projector leaves one
  // particle at the other point; the rescale factor is f / Tr(FP) = 2.
  SpaceTimeStructure st(2, 1);
  Matrix P = two_particle_projector(0.0, 0.0);
  RestrictionResult r = restrict_renormalize(st, P, 1);
  CHECK(r.structure.points() == 1);
  CHECK(r.scale == doctest::Approx(2.0).epsilon(1e-12));
  Complex tr = r.operator_matrix.trace();
  CHECK(std::abs(tr - Complex(2.0)) < 1e-12);

  // If P has no support at x, the restriction just drops the point.
  Matrix Q = Matrix::Zero(4, 4);
  Q(1, 1) = 1.0;
  RestrictionResult r2 = restrict_renormalize(st, Q, 1);
  CHECK(r2.scale == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((r2.operator_matrix - localize(st, Q, 0, 0).block(0, 0, 2, 2))
            .cwiseAbs().maxCoeff() == 0.0);

  // Random rescaled restrictions keep trace f; when the rescale factor is
  // positive (local trace at x below f), -Q stays positive as a positive
  // multiple of a compression of -P.
  SpaceTimeStructure st3(3, 1);
  for (int trial = 0; trial < 40; ++trial) {
    FermionicOperator op = random_operator(st3, 1, OperatorMode::class_pf, 800 + trial);
    RestrictionResult rr = restrict_renormalize(st3, op.matrix, trial % 3);
    CHECK(std::abs(rr.operator_matrix.trace() - Complex(1.0)) < 1e-8);
    if (rr.scale > 0.0)
      CHECK(is_positive_operator(rr.structure.space(), -rr.operator_matrix, 1e-8));
  }
}
