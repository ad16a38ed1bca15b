#include "cpl/rare_events.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cpl/polyhedron.hpp"

namespace cpl {

RareEventModel::RareEventModel(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw invalid_input("model needs at least one entry");
  dim_ = entries_.front().second.dim();
  max_p_ = 0.0;
  for (const auto& [p, v] : entries_) {
    if (p < 0.0 || p > 1.0) throw invalid_input("p_i outside [0,1]");
    if (v.dim() != dim_) throw invalid_input("inconsistent V_i dimension");
    max_p_ = std::max(max_p_, p);
  }
}

DiscreteDistribution exact_G(const RareEventModel& model, const Limits& limits) {
  DiscreteDistribution g = origin_mass(model.dim());
  for (const auto& [p, v] : model.entries())
    g = convolve(g, mixture(p, v), limits);
  return g;
}

BoundedResult exact_D(const RareEventModel& model, double tol,
                      const Limits& limits) {
  if (!(tol > 0.0)) throw invalid_input("tol must be positive");
  DiscreteDistribution d = origin_mass(model.dim());
  double err = 0.0;
  const double per_factor = tol / static_cast<double>(model.n());
  for (const auto& [p, v] : model.entries()) {
    auto cp = compound_poisson(1.0, mixture(p, v), per_factor, limits);
    err += cp.error_bound;
    d = convolve(d, cp.dist, limits);
  }
  return {std::move(d), err};
}

namespace {

// Inverse-CDF sampler over the atoms of a distribution.
class AtomSampler {
 public:
  explicit AtomSampler(const DiscreteDistribution& f) : f_(&f) {
    cum_.reserve(f.size());
    double c = 0.0;
    for (const auto& a : f.atoms()) {
      c += a.mass;
      cum_.push_back(c);
    }
    cum_.back() = 1.0;
  }

  const Point& draw(std::mt19937_64& rng) const {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cum_.begin());
    if (i >= f_->size()) i = f_->size() - 1;
    return f_->atoms()[i].x;
  }

 private:
  const DiscreteDistribution* f_;
  std::vector<double> cum_;
};

std::uint64_t poisson1_draw(std::mt19937_64& rng) {
  // Knuth's product method, mean 1.
  const double threshold = std::exp(-1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double prod = unif(rng);
  std::uint64_t k = 0;
  while (prod > threshold) {
    prod *= unif(rng);
    ++k;
  }
  return k;
}

void add_point(Point& acc, const Point& x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += x[i];
}

}  // namespace

EmpiricalSample simulate_S(const RareEventModel& model, std::size_t n_samples,
                           std::uint64_t seed) {
  if (n_samples == 0) throw invalid_input("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<AtomSampler> samplers;
  samplers.reserve(model.n());
  for (const auto& e : model.entries()) samplers.emplace_back(e.second);
  EmpiricalSample out;
  out.reserve(n_samples);
  const std::size_t d = static_cast<std::size_t>(model.dim());
  for (std::size_t s = 0; s < n_samples; ++s) {
    Point acc(d, 0.0);
    for (std::size_t i = 0; i < model.n(); ++i)
      if (unif(rng) < model.entries()[i].first)
        add_point(acc, samplers[i].draw(rng));
    out.push_back(std::move(acc));
  }
  return out;
}

EmpiricalSample simulate_T(const RareEventModel& model, std::size_t n_samples,
                           std::uint64_t seed) {
  if (n_samples == 0) throw invalid_input("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<AtomSampler> samplers;
  samplers.reserve(model.n());
  for (const auto& e : model.entries()) samplers.emplace_back(e.second);
  EmpiricalSample out;
  out.reserve(n_samples);
  const std::size_t d = static_cast<std::size_t>(model.dim());
  for (std::size_t s = 0; s < n_samples; ++s) {
    Point acc(d, 0.0);
    for (std::size_t i = 0; i < model.n(); ++i) {
      std::uint64_t k = poisson1_draw(rng);
      for (std::uint64_t r = 0; r < k; ++r)
        if (unif(rng) < model.entries()[i].first)
          add_point(acc, samplers[i].draw(rng));
    }
    out.push_back(std::move(acc));
  }
  return out;
}

double empirical_kolmogorov(std::vector<double> sample,
                            const DiscreteDistribution& f) {
  if (f.dim() != 1) throw invalid_input("empirical comparison is 1-D only");
  if (sample.empty()) throw invalid_input("empty sample");
  std::sort(sample.begin(), sample.end());
  // Merge jump points of both step functions; check the gap just before and
  // at each jump.
  std::vector<std::pair<double, double>> jumps;  // (x, model mass)
  for (const auto& a : f.atoms()) jumps.emplace_back(a.x[0], a.mass);
  std::sort(jumps.begin(), jumps.end());
  const double inc = 1.0 / static_cast<double>(sample.size());
  std::size_t si = 0, ji = 0;
  double cdf_n = 0.0, cdf_f = 0.0, best = 0.0;
  while (si < sample.size() || ji < jumps.size()) {
    double x = kInf;
    if (si < sample.size()) x = sample[si];
    if (ji < jumps.size()) x = std::min(x, jumps[ji].first);
    best = std::max(best, std::abs(cdf_n - cdf_f));  // gap on (prev, x)
    while (si < sample.size() && sample[si] == x) {
      cdf_n += inc;
      ++si;
    }
    while (ji < jumps.size() && jumps[ji].first == x) {
      cdf_f += jumps[ji].second;
      ++ji;
    }
    best = std::max(best, std::abs(cdf_n - cdf_f));  // gap at x
  }
  return best;
}

double dkw_epsilon(std::size_t n, double delta) {
  if (n == 0 || !(delta > 0.0) || delta >= 1.0)
    throw invalid_input("bad DKW parameters");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

}  // namespace cpl
