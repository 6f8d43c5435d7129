#include "ipvar/transforms.hpp"

#include <cmath>

#include "ipvar/action.hpp"
#include "ipvar/fermionic.hpp"

namespace ipvar {

SpreadResult spread_point(const SpaceTimeStructure& st, const Matrix& P, double mu) {
  if (P.rows() != st.dim() || P.cols() != st.dim())
    throw DimensionError("spread_point: P must be dim x dim");
  int m = st.points();
  int b = st.block_size();

  // Pick the point with maximal Lagrangian row sum (lowest index on ties).
  int best = 0;
  double best_sum = -std::numeric_limits<double>::infinity();
  for (int x = 0; x < m; ++x) {
    double row = 0.0;
    for (int y = 0; y < m; ++y) row += lagrangian(closed_chain(st, P, x, y), mu);
    if (row > best_sum + 0.0) {
      best_sum = row;
      best = x;
    }
  }

  // Assemble Phat directly from the kernel relations; the new point is
  // appended at index m and pairs with the chosen point best.
  SpaceTimeStructure out(m + 1, st.spin_half());
  Matrix Phat = Matrix::Zero(out.dim(), out.dim());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto src = [&](int y) { return y == m ? best : y; };  // new point reads point best
  for (int y = 0; y <= m; ++y) {
    for (int z = 0; z <= m; ++z) {
      bool ys = (y == best || y == m), zs = (z == best || z == m);
      Matrix block = localize(st, P, src(y), src(z));
      if (ys && zs)
        block *= 0.5;
      else if (ys || zs)
        block *= inv_sqrt2;
      Phat.block(out.block_start(y), out.block_start(z), b, b) = block;
    }
  }
  return SpreadResult{out, std::move(Phat), best};
}

RestrictionResult restrict_renormalize(const SpaceTimeStructure& st, const Matrix& P, int x) {
  if (P.rows() != st.dim() || P.cols() != st.dim())
    throw DimensionError("restrict_renormalize: P must be dim x dim");
  if (st.points() < 2)
    throw std::invalid_argument("restrict_renormalize: need at least two points");
  st.block_start(x);  // validates x
  double f = std::real(P.trace());
  Complex trFP = P.trace() - local_trace(st, P, x);
  if (std::abs(trFP) <= 1e-12)
    throw std::invalid_argument("restrict_renormalize: Tr(F P) vanishes");
  double c = f / std::real(trFP);

  SpaceTimeStructure out(st.points() - 1, st.spin_half());
  Matrix Q(out.dim(), out.dim());
  int b = st.block_size();
  auto old_index = [&](int y) { return y < x ? y : y + 1; };
  for (int y = 0; y < out.points(); ++y)
    for (int z = 0; z < out.points(); ++z)
      Q.block(out.block_start(y), out.block_start(z), b, b) =
          c * localize(st, P, old_index(y), old_index(z));
  return RestrictionResult{out, std::move(Q), c};
}

}  // namespace ipvar
