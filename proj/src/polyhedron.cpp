#include "cpl/polyhedron.hpp"

#include <cmath>

namespace cpl {

namespace {

void check_unit_direction(const Point& t, int dim) {
  if (static_cast<int>(t.size()) != dim)
    throw invalid_input("direction dimension mismatch");
  double n = norm(t);
  if (!(n > 0.0)) throw invalid_input("zero-norm direction");
  if (std::abs(n - 1.0) > 1e-12)
    throw invalid_input("direction must have unit norm");
}

}  // namespace

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Point& a) { return std::sqrt(dot(a, a)); }

Polyhedron::Polyhedron(int dim, std::vector<Halfspace> halfspaces)
    : dim_(dim), halfspaces_(std::move(halfspaces)) {
  if (dim <= 0) throw invalid_input("dimension must be positive");
  if (halfspaces_.empty()) throw invalid_input("polyhedron needs a halfspace");
  for (const auto& h : halfspaces_) {
    check_unit_direction(h.direction, dim);
    if (std::isnan(h.threshold) || h.threshold == -kInf)
      throw invalid_input("threshold must be a real number or +inf");
  }
}

DirectionSet::DirectionSet(int dim, std::vector<Point> directions)
    : dim_(dim), directions_(std::move(directions)) {
  if (dim <= 0) throw invalid_input("dimension must be positive");
  if (directions_.empty()) throw invalid_input("direction set is empty");
  for (const auto& t : directions_) check_unit_direction(t, dim);
}

bool contains(const Polyhedron& p, const Point& x) {
  if (static_cast<int>(x.size()) != p.dim())
    throw invalid_input("dimension mismatch");
  for (const auto& h : p.halfspaces()) {
    if (h.threshold == kInf) continue;
    if (dot(x, h.direction) > h.threshold) return false;
  }
  return true;
}

double measure(const DiscreteDistribution& f, const Polyhedron& p) {
  if (f.dim() != p.dim()) throw invalid_input("dimension mismatch");
  double m = 0.0;
  for (const auto& a : f.atoms())
    if (contains(p, a.x)) m += a.mass;
  return m;
}

}  // namespace cpl
