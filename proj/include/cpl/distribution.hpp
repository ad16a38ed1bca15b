#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cpl/error.hpp"

namespace cpl {

// A point of the ambient space R^d. Dimension is the vector length.
using Point = std::vector<double>;

struct Atom {
  Point x;
  double mass;
};

// Caps for exact convolution chains. Exceeding a cap raises resource_limit;
// callers are expected to fall back to pruned / search modes.
struct Limits {
  std::size_t max_pair_products = 50'000'000;
  std::size_t max_atoms = 4'000'000;
};

// Finite-support probability measure on R^d, exact up to double arithmetic.
//
// Support points are deduplicated on a coordinate grid of step `quantum`
// (atoms whose coordinates agree after quantization are merged, the first
// seen representative is kept). Atoms are stored sorted by quantized
// coordinates, so equal distributions have identical atom order. Immutable
// after construction.
class DiscreteDistribution {
 public:
  static constexpr double kDefaultQuantum = 1e-9;

  DiscreteDistribution(int dim, std::vector<Atom> atoms,
                       double quantum = kDefaultQuantum);

  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double quantum() const { return quantum_; }

  // Mass at a given point (0 if not in the support).
  double mass_at(const Point& x) const;

 private:
  int dim_;
  double quantum_;
  std::vector<Atom> atoms_;
  std::vector<std::vector<std::int64_t>> keys_;  // quantized, sorted, parallel to atoms_
};

// Quantized coordinate key used for support deduplication.
std::vector<std::int64_t> quantize(const Point& x, double quantum);

// E_x, the distribution concentrated at x. E = point_mass of the origin.
DiscreteDistribution point_mass(const Point& x);

// E in dimension d.
DiscreteDistribution origin_mass(int dim);

DiscreteDistribution convolve(const DiscreteDistribution& f,
                              const DiscreteDistribution& g,
                              const Limits& limits = {});

struct BoundedResult {
  DiscreteDistribution dist;
  double error_bound;  // total-variation error accumulated by truncation/pruning
};

// n-fold convolution power by binary exponentiation. F^0 is E.
DiscreteDistribution power(const DiscreteDistribution& f, std::uint64_t n,
                           const Limits& limits = {});

// Same, pruning every intermediate to `prune_eps` in total variation.
BoundedResult power(const DiscreteDistribution& f, std::uint64_t n,
                    double prune_eps, const Limits& limits = {});

// Compound Poisson law with rate alpha and jump distribution H: the
// Poisson(alpha)-weighted mixture of the convolution powers of H. The series
// is truncated once the Poisson tail mass drops below tol, then renormalized.
BoundedResult compound_poisson(double alpha, const DiscreteDistribution& h,
                               double tol, const Limits& limits = {});

// (1-p) E + p V.
DiscreteDistribution mixture(double p, const DiscreteDistribution& v);

// Removes the smallest atoms while the removed total stays <= eps,
// renormalizes, and reports the removed mass as a total-variation bound.
BoundedResult prune(const DiscreteDistribution& f, double eps);

// Characteristic function of F at t.
std::complex<double> char_fn(const DiscreteDistribution& f, const Point& t);

// Support closed under negation with matching masses, within tol.
bool is_symmetric(const DiscreteDistribution& f, double tol = 1e-12);

struct ClassCheckGrid {
  int points_per_axis = 4096;
  // Scan range |t_i| <= max_abs_t for non-lattice supports. Lattice supports
  // are detected and scanned over one period of the characteristic function.
  double max_abs_t = 64.0;
};

struct CharClassReport {
  bool is_symmetric = false;
  // 1 + min over the grid of the (real) characteristic function, clipped to
  // [0, 2]. Certified on the scanned grid only. Meaningless unless symmetric.
  double alpha_lower_bound = 0.0;
  long grid_points_checked = 0;
  double min_charfn_value = 0.0;
};

CharClassReport class_check(const DiscreteDistribution& f,
                            const ClassCheckGrid& grid = {});

// Half the L1 distance between the two mass functions.
double total_variation(const DiscreteDistribution& f,
                       const DiscreteDistribution& g);

Point mean(const DiscreteDistribution& f);

}  // namespace cpl
