#include "cpl/random_sums.hpp"

#include <cmath>

namespace cpl {

IntegerPmf::IntegerPmf(std::vector<double> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) throw invalid_input("empty pmf");
  double sum = 0.0;
  for (double m : masses_) {
    if (m < 0.0) throw invalid_input("negative pmf mass");
    sum += m;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw invalid_input("pmf does not sum to 1");
  for (double& m : masses_) m /= sum;
}

IntegerPmf IntegerPmf::delta(std::size_t k) {
  std::vector<double> m(k + 1, 0.0);
  m[k] = 1.0;
  return IntegerPmf(std::move(m));
}

IntegerPmf IntegerPmf::poisson(double alpha, double tol) {
  if (!(alpha > 0.0) || !(tol > 0.0)) throw invalid_input("bad parameters");
  std::vector<double> m;
  double cum = 0.0;
  const std::size_t cap =
      static_cast<std::size_t>(alpha + 30.0 * std::sqrt(alpha + 1.0)) + 1000;
  for (std::size_t k = 0;; ++k) {
    double w = std::exp(static_cast<double>(k) * std::log(alpha) - alpha -
                        std::lgamma(static_cast<double>(k) + 1.0));
    m.push_back(w);
    cum += w;
    if (cum >= 1.0 - tol) break;
    if (k >= cap) throw resource_limit("poisson truncation cap reached");
  }
  return IntegerPmf(std::move(m));
}

BoundedResult random_sum(const IntegerPmf& u, const DiscreteDistribution& f,
                         double weight_floor, const Limits& limits) {
  // Accumulate U{k} * F^k with incremental powers of F.
  DiscreteDistribution fk = origin_mass(f.dim());
  double skipped = 0.0;
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k <= u.max_value(); ++k) {
    double w = u.mass(k);
    if (w > weight_floor) {
      for (const auto& a : fk.atoms()) atoms.push_back({a.x, w * a.mass});
    } else {
      skipped += w;
    }
    if (k < u.max_value()) fk = convolve(fk, f, limits);
    if (atoms.size() > limits.max_atoms)
      throw resource_limit("random_sum support exceeds atom cap");
  }
  return {DiscreteDistribution(f.dim(), std::move(atoms), f.quantum()), skipped};
}

double coupling_cost(std::size_t k, std::size_t l,
                     const CouplingBoundSpec& spec) {
  const double dk = static_cast<double>(k), dl = static_cast<double>(l);
  double v = spec.const_c_m * std::abs(dk - dl) / (dl + 1.0);
  if (spec.type == BoundType::symmetric)
    v += spec.const_cm / std::sqrt(dl + 1.0);
  return std::min(v, 1.0);
}

}  // namespace cpl
