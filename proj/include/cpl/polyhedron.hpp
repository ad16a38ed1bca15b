#pragma once

#include <limits>
#include <vector>

#include "cpl/distribution.hpp"

namespace cpl {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed halfspace <x, direction> <= threshold. Directions have unit
// Euclidean norm; threshold +inf means the whole space.
struct Halfspace {
  Point direction;
  double threshold = kInf;
};

// Intersection of m closed halfspaces.
class Polyhedron {
 public:
  Polyhedron(int dim, std::vector<Halfspace> halfspaces);

  int dim() const { return dim_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  std::size_t num_halfspaces() const { return halfspaces_.size(); }

 private:
  int dim_;
  std::vector<Halfspace> halfspaces_;
};

class DirectionSet {
 public:
  DirectionSet(int dim, std::vector<Point> directions);

  int dim() const { return dim_; }
  const std::vector<Point>& directions() const { return directions_; }
  std::size_t size() const { return directions_.size(); }

 private:
  int dim_;
  std::vector<Point> directions_;
};

double dot(const Point& a, const Point& b);
double norm(const Point& a);

bool contains(const Polyhedron& p, const Point& x);

// Total mass of F carried by P.
double measure(const DiscreteDistribution& f, const Polyhedron& p);

}  // namespace cpl
