#include "cpl/projection.hpp"

#include <cmath>

namespace cpl {

ProjectionBasis::ProjectionBasis(int original_dim, std::vector<Point> basis)
    : original_dim_(original_dim), basis_(std::move(basis)) {
  if (original_dim <= 0) throw invalid_input("dimension must be positive");
  if (basis_.empty()) throw invalid_input("empty projection basis");
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (static_cast<int>(basis_[i].size()) != original_dim)
      throw invalid_input("basis vector dimension mismatch");
    if (std::abs(norm(basis_[i]) - 1.0) > 1e-10)
      throw invalid_input("basis vector not unit");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(dot(basis_[i], basis_[j])) > 1e-10)
        throw invalid_input("basis vectors not orthogonal");
  }
}

Point ProjectionBasis::coordinates(const Point& x) const {
  if (static_cast<int>(x.size()) != original_dim_)
    throw invalid_input("dimension mismatch");
  Point c(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) c[i] = dot(x, basis_[i]);
  return c;
}

ProjectionBasis orthonormal_basis(const DirectionSet& t, double rank_tol) {
  std::vector<Point> basis;
  for (const auto& dir : t.directions()) {
    Point r = dir;
    for (const auto& e : basis) {
      double c = dot(r, e);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * e[i];
    }
    // Second pass stabilizes against cancellation.
    for (const auto& e : basis) {
      double c = dot(r, e);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * e[i];
    }
    double n = norm(r);
    if (n <= rank_tol) continue;
    for (double& v : r) v /= n;
    basis.push_back(std::move(r));
  }
  return ProjectionBasis(t.dim(), std::move(basis));
}

DiscreteDistribution project_distribution(const DiscreteDistribution& f,
                                          const ProjectionBasis& b) {
  if (f.dim() != b.original_dim()) throw invalid_input("dimension mismatch");
  std::vector<Atom> atoms;
  atoms.reserve(f.size());
  for (const auto& a : f.atoms()) atoms.push_back({b.coordinates(a.x), a.mass});
  return DiscreteDistribution(b.rank(), std::move(atoms), f.quantum());
}

Polyhedron project_polyhedron(const Polyhedron& p, const ProjectionBasis& b) {
  if (p.dim() != b.original_dim()) throw invalid_input("dimension mismatch");
  std::vector<Halfspace> out;
  out.reserve(p.num_halfspaces());
  for (const auto& h : p.halfspaces()) {
    Point c = b.coordinates(h.direction);
    // The direction must lie in the span: its reconstruction from basis
    // coordinates must reproduce it.
    Point rec(h.direction.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < rec.size(); ++j)
        rec[j] += c[i] * b.basis()[i][j];
    double resid = 0.0;
    for (std::size_t j = 0; j < rec.size(); ++j) {
      double d = rec[j] - h.direction[j];
      resid += d * d;
    }
    if (std::sqrt(resid) > 1e-10)
      throw invalid_input("polyhedron direction outside basis span");
    double n = norm(c);
    for (double& v : c) v /= n;
    out.push_back({std::move(c), h.threshold / n});
  }
  return Polyhedron(b.rank(), std::move(out));
}

}  // namespace cpl
