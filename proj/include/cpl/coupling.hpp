#pragma once

#include "cpl/random_sums.hpp"

namespace cpl {

// Joint pmf over {0..U_max} x {0..V_max} with marginals U and V.
class Coupling {
 public:
  Coupling(std::size_t rows, std::size_t cols, std::vector<double> joint);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t k, std::size_t l) const {
    return joint_[k * cols_ + l];
  }
  const std::vector<double>& joint() const { return joint_; }

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

 private:
  std::size_t rows_, cols_;
  std::vector<double> joint_;
};

// Expected coupling_cost under the joint law.
double expected_cost(const Coupling& c, const CouplingBoundSpec& spec);

struct OptimalCouplingResult {
  Coupling coupling;
  double value;
};

// Exact minimizer of the expected cost over all couplings of U and V
// (transportation simplex). Deterministic.
OptimalCouplingResult optimal_coupling(const IntegerPmf& u, const IntegerPmf& v,
                                       const CouplingBoundSpec& spec,
                                       std::size_t max_support = 200);

// Comonotone coupling by matching cumulative masses in order; a cheap upper
// bound for the optimum.
Coupling quantile_coupling(const IntegerPmf& u, const IntegerPmf& v);

}  // namespace cpl
