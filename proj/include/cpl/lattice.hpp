#pragma once

#include <complex>
#include <vector>

#include "cpl/distribution.hpp"

namespace cpl {

// Dense representation of a distribution supported on a regular grid
// origin + (i_1 h_1, ..., i_d h_d). Dimensions 1 and 2 only; this is the
// FFT fast path for convolutions, the sparse path is the general fallback.
class LatticeDistribution {
 public:
  // extents.size() == dim; masses in row-major order (last axis fastest).
  LatticeDistribution(Point origin, std::vector<double> spacing,
                      std::vector<std::size_t> extents,
                      std::vector<double> masses);

  int dim() const { return static_cast<int>(spacing_.size()); }
  const Point& origin() const { return origin_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<std::size_t>& extents() const { return extents_; }
  const std::vector<double>& masses() const { return masses_; }

 private:
  Point origin_;
  std::vector<double> spacing_;
  std::vector<std::size_t> extents_;
  std::vector<double> masses_;
};

// Fits a sparse distribution onto its minimal bounding lattice with the given
// per-axis spacing. Throws invalid_input if some atom is off-lattice.
LatticeDistribution to_lattice(const DiscreteDistribution& f,
                               const std::vector<double>& spacing);

DiscreteDistribution to_sparse(const LatticeDistribution& f,
                               double drop_below = 0.0);

// FFT convolution. Negative round-off masses are clipped to zero and the
// result renormalized.
LatticeDistribution convolve_lattice(const LatticeDistribution& f,
                                     const LatticeDistribution& g);

// In-place iterative radix-2 FFT; size must be a power of two.
void fft(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace cpl
