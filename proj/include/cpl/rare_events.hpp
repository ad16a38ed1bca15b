#pragma once

#include <utility>
#include <vector>

#include "cpl/distribution.hpp"

namespace cpl {

// Per-observation rare-event parameters: observation i contributes no loss
// with probability 1-p_i, and a V_i-distributed loss with probability p_i.
class RareEventModel {
 public:
  using Entry = std::pair<double, DiscreteDistribution>;

  explicit RareEventModel(std::vector<Entry> entries);

  int dim() const { return dim_; }
  std::size_t n() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  double max_p() const { return max_p_; }

 private:
  int dim_;
  double max_p_;
  std::vector<Entry> entries_;
};

using EmpiricalSample = std::vector<Point>;

// Law of the cumulative loss: the convolution product of the per-observation
// mixtures.
DiscreteDistribution exact_G(const RareEventModel& model,
                             const Limits& limits = {});

// Poissonized counterpart: the convolution product of the compound Poisson
// laws of the per-observation mixtures (truncation tol split across factors).
BoundedResult exact_D(const RareEventModel& model, double tol,
                      const Limits& limits = {});

// N i.i.d. draws of the cumulative loss.
EmpiricalSample simulate_S(const RareEventModel& model, std::size_t n_samples,
                           std::uint64_t seed);

// N i.i.d. draws of the Poisson point process functional: each observation
// index contributes Poisson(1) many independent mixture draws (superposition
// form of the process with intensity equal to the summed observation laws).
EmpiricalSample simulate_T(const RareEventModel& model, std::size_t n_samples,
                           std::uint64_t seed);

// Exact sup-distance between the empirical CDF of a 1-D sample and the CDF
// of a finite-support distribution.
double empirical_kolmogorov(std::vector<double> sample,
                            const DiscreteDistribution& f);

// Dvoretzky-Kiefer-Wolfowitz band: with probability >= 1-delta the empirical
// CDF of n samples stays within this distance of the truth.
double dkw_epsilon(std::size_t n, double delta);

}  // namespace cpl
