#pragma once

#include "ipvar/core_space.hpp"

namespace ipvar {

struct SpreadResult {
  SpaceTimeStructure structure;  // m+1 points; the new point has index m
  Matrix operator_matrix;
  int spread_index = 0;  // the point x whose Lagrangian row sum was maximal
};

/// Embeds P into a discrete space-time with one extra point and conjugates by
/// the unitary that splits point x evenly between x and the new point. The
/// action drops by at least the factor 1 - 3/(4m); projector inputs give
/// projector outputs. Kernel relations of the output:
///   Phat(y,z) = P(y,z)          for y,z not in {x, m}
///   Phat(y,z) = P(x,z)/sqrt(2)  for y in {x, m}, z outside
///   Phat(z,y) = P(z,x)/sqrt(2)  for y in {x, m}, z outside
///   Phat(y,z) = P(x,x)/2        for y,z in {x, m}
SpreadResult spread_point(const SpaceTimeStructure& st, const Matrix& P, double mu);

struct RestrictionResult {
  SpaceTimeStructure structure;  // m-1 points, point x removed
  Matrix operator_matrix;        // Q = c F P F with the x block dropped
  double scale = 0.0;            // c = f / Tr(F P)
};

/// Restriction to the complement of point x, renormalized to keep trace f
/// (f read off as Re Tr P). Requires |Tr(F P)| > 1e-12.
RestrictionResult restrict_renormalize(const SpaceTimeStructure& st, const Matrix& P, int x);

}  // namespace ipvar
