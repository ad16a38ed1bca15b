#pragma once

#include "cpl/distribution.hpp"

namespace cpl {

// Probability mass function on {0, 1, ..., K}. Index = value.
class IntegerPmf {
 public:
  explicit IntegerPmf(std::vector<double> masses);

  static IntegerPmf delta(std::size_t k);
  // Poisson(alpha) truncated once the tail drops below tol, renormalized.
  static IntegerPmf poisson(double alpha, double tol);

  std::size_t max_value() const { return masses_.size() - 1; }
  const std::vector<double>& masses() const { return masses_; }
  double mass(std::size_t k) const {
    return k < masses_.size() ? masses_[k] : 0.0;
  }

 private:
  std::vector<double> masses_;
};

// Law of a sum of a random number of i.i.d. F-distributed vectors: the
// U-weighted mixture of the convolution powers of F. Weights below
// weight_floor are skipped and reported in the error bound.
BoundedResult random_sum(const IntegerPmf& u, const DiscreteDistribution& f,
                         double weight_floor = 0.0, const Limits& limits = {});

enum class BoundType {
  symmetric,   // c*m/sqrt(l+1) + c(m)*|k-l|/(l+1), capped at 1
  plus_class,  // c(m)*|k-l|/(l+1), capped at 1
};

// Cost integrand of the random-sum coupling bound. The theory's constants
// are unspecified; they are user parameters here.
struct CouplingBoundSpec {
  BoundType type = BoundType::plus_class;
  double const_cm = 1.0;   // multiplies m/sqrt(l+1)
  double const_c_m = 1.0;  // multiplies |k-l|/(l+1)
};

double coupling_cost(std::size_t k, std::size_t l,
                     const CouplingBoundSpec& spec);

}  // namespace cpl
