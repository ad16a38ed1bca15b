#pragma once

#include "cpl/polyhedron.hpp"

namespace cpl {

// Orthonormal basis of the span of a direction set; projecting onto it
// preserves every inner product with the generating directions, so polyhedron
// measures survive the reduction to k = rank dimensions exactly.
class ProjectionBasis {
 public:
  ProjectionBasis(int original_dim, std::vector<Point> basis);

  int original_dim() const { return original_dim_; }
  int rank() const { return static_cast<int>(basis_.size()); }
  const std::vector<Point>& basis() const { return basis_; }

  // Coordinates of x in the basis (length = rank).
  Point coordinates(const Point& x) const;

 private:
  int original_dim_;
  std::vector<Point> basis_;
};

// Modified Gram-Schmidt; directions with residual norm <= rank_tol dropped.
ProjectionBasis orthonormal_basis(const DirectionSet& t,
                                  double rank_tol = 1e-10);

// Law of the basis coordinates of an F-distributed vector. Atoms that differ
// only orthogonally to the span merge.
DiscreteDistribution project_distribution(const DiscreteDistribution& f,
                                          const ProjectionBasis& b);

// Rewrites each halfspace in basis coordinates (same thresholds). Every
// direction of P must lie in the span of the basis.
Polyhedron project_polyhedron(const Polyhedron& p, const ProjectionBasis& b);

}  // namespace cpl
