#include "cpl/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace cpl {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int64_t v : k) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Mass accumulator keyed by quantized coordinates. First-seen coordinates are
// kept as the representative of a merged support point.
class Accumulator {
 public:
  Accumulator(int dim, double quantum) : dim_(dim), quantum_(quantum) {}

  void add(const Point& x, double mass) {
    if (mass == 0.0) return;
    auto key = quantize(x, quantum_);
    auto [it, inserted] = cells_.try_emplace(std::move(key), Atom{x, mass});
    if (!inserted) it->second.mass += mass;
  }

  void add_shifted(const Point& x, const Point& shift, double mass) {
    Point y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + shift[i];
    add(y, mass);
  }

  std::size_t size() const { return cells_.size(); }

  DiscreteDistribution finish() {
    std::vector<std::pair<std::vector<std::int64_t>, Atom>> items;
    items.reserve(cells_.size());
    for (auto& kv : cells_) items.emplace_back(kv.first, kv.second);
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double total = 0.0;
    for (const auto& it : items)
      if (it.second.mass > 0.0) total += it.second.mass;
    if (total <= 0.0) throw invalid_input("no mass to normalize");
    std::vector<Atom> atoms;
    atoms.reserve(items.size());
    for (auto& it : items)
      if (it.second.mass > 0.0) {
        it.second.mass /= total;
        atoms.push_back(std::move(it.second));
      }
    return DiscreteDistribution(dim_, std::move(atoms), quantum_);
  }

 private:
  int dim_;
  double quantum_;
  std::unordered_map<std::vector<std::int64_t>, Atom, KeyHash> cells_;
};

void check_same_dim(const DiscreteDistribution& f, const DiscreteDistribution& g) {
  if (f.dim() != g.dim()) throw invalid_input("dimension mismatch");
}

double log_poisson_pmf(double alpha, std::uint64_t k) {
  return static_cast<double>(k) * std::log(alpha) - alpha -
         std::lgamma(static_cast<double>(k) + 1.0);
}

}  // namespace

std::vector<std::int64_t> quantize(const Point& x, double quantum) {
  std::vector<std::int64_t> key(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    key[i] = std::llround(x[i] / quantum);
  return key;
}

DiscreteDistribution::DiscreteDistribution(int dim, std::vector<Atom> atoms,
                                           double quantum)
    : dim_(dim), quantum_(quantum) {
  if (dim <= 0) throw invalid_input("dimension must be positive");
  if (quantum <= 0) throw invalid_input("quantum must be positive");
  if (atoms.empty()) throw invalid_input("distribution needs at least one atom");
  double sum = 0.0;
  for (const auto& a : atoms) {
    if (static_cast<int>(a.x.size()) != dim)
      throw invalid_input("atom dimension mismatch");
    for (double c : a.x)
      if (!std::isfinite(c)) throw invalid_input("non-finite coordinate");
    if (!(a.mass > 0.0)) throw invalid_input("atom mass must be positive");
    sum += a.mass;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw invalid_input("masses do not sum to 1");
  // Deduplicate on the quantization grid, keeping the first-seen coordinates.
  std::vector<std::pair<std::vector<std::int64_t>, Atom>> items;
  items.reserve(atoms.size());
  {
    std::unordered_map<std::vector<std::int64_t>, std::size_t, KeyHash> index;
    for (auto& a : atoms) {
      auto key = quantize(a.x, quantum);
      auto [it, inserted] = index.try_emplace(key, items.size());
      if (inserted)
        items.emplace_back(std::move(key), std::move(a));
      else
        items[it->second].second.mass += a.mass;
    }
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  atoms_.reserve(items.size());
  keys_.reserve(items.size());
  for (auto& it : items) {
    it.second.mass /= sum;
    atoms_.push_back(std::move(it.second));
    keys_.push_back(std::move(it.first));
  }
}

double DiscreteDistribution::mass_at(const Point& x) const {
  if (static_cast<int>(x.size()) != dim_) throw invalid_input("dimension mismatch");
  auto key = quantize(x, quantum_);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return 0.0;
  return atoms_[static_cast<std::size_t>(it - keys_.begin())].mass;
}

DiscreteDistribution point_mass(const Point& x) {
  return DiscreteDistribution(static_cast<int>(x.size()), {{x, 1.0}});
}

DiscreteDistribution origin_mass(int dim) {
  return point_mass(Point(static_cast<std::size_t>(dim), 0.0));
}

DiscreteDistribution convolve(const DiscreteDistribution& f,
                              const DiscreteDistribution& g,
                              const Limits& limits) {
  check_same_dim(f, g);
  if (f.size() * g.size() > limits.max_pair_products)
    throw resource_limit("convolution support product exceeds cap");
  Accumulator acc(f.dim(), f.quantum());
  for (const auto& a : f.atoms())
    for (const auto& b : g.atoms()) acc.add_shifted(a.x, b.x, a.mass * b.mass);
  if (acc.size() > limits.max_atoms)
    throw resource_limit("convolution support exceeds atom cap");
  return acc.finish();
}

DiscreteDistribution power(const DiscreteDistribution& f, std::uint64_t n,
                           const Limits& limits) {
  return power(f, n, 0.0, limits).dist;
}

BoundedResult power(const DiscreteDistribution& f, std::uint64_t n,
                    double prune_eps, const Limits& limits) {
  DiscreteDistribution result = origin_mass(f.dim());
  DiscreteDistribution base = f;
  // Total-variation error of the running approximations. Convolving two
  // approximations adds their errors, so squaring doubles the base error.
  double err_base = 0.0, err_result = 0.0;
  auto maybe_prune = [&](DiscreteDistribution d, double& step) {
    step = 0.0;
    if (prune_eps <= 0.0) return d;
    auto p = prune(d, prune_eps);
    step = p.error_bound;
    return p.dist;
  };
  bool have_result = false;
  double step = 0.0;
  while (n > 0) {
    if (n & 1) {
      if (have_result) {
        result = maybe_prune(convolve(result, base, limits), step);
        err_result += err_base + step;
      } else {
        result = base;
        err_result = err_base;
        have_result = true;
      }
    }
    n >>= 1;
    if (n > 0) {
      base = maybe_prune(convolve(base, base, limits), step);
      err_base = 2.0 * err_base + step;
    }
  }
  return {std::move(result), err_result};
}

BoundedResult compound_poisson(double alpha, const DiscreteDistribution& h,
                               double tol, const Limits& limits) {
  if (!(alpha > 0.0)) throw invalid_input("alpha must be positive");
  if (!(tol > 0.0)) throw invalid_input("tol must be positive");
  Accumulator acc(h.dim(), h.quantum());
  DiscreteDistribution hk = origin_mass(h.dim());
  // Kahan summation of the Poisson weights; stop once the remaining tail
  // is below tol.
  double cum = 0.0, comp = 0.0;
  const std::uint64_t hard_cap =
      static_cast<std::uint64_t>(alpha + 30.0 * std::sqrt(alpha + 1.0)) + 1000;
  for (std::uint64_t k = 0;; ++k) {
    double w = std::exp(log_poisson_pmf(alpha, k));
    for (const auto& a : hk.atoms()) acc.add(a.x, w * a.mass);
    double y = w - comp;
    double t = cum + y;
    comp = (t - cum) - y;
    cum = t;
    if (cum >= 1.0 - tol) break;
    if (k >= hard_cap)
      throw resource_limit("compound_poisson truncation cap reached");
    if (acc.size() > limits.max_atoms)
      throw resource_limit("compound_poisson support exceeds atom cap");
    hk = convolve(hk, h, limits);
  }
  return {acc.finish(), std::max(0.0, 1.0 - cum)};
}

DiscreteDistribution mixture(double p, const DiscreteDistribution& v) {
  if (p < 0.0 || p > 1.0) throw invalid_input("mixture weight outside [0,1]");
  if (p == 1.0) return v;
  Accumulator acc(v.dim(), v.quantum());
  acc.add(Point(static_cast<std::size_t>(v.dim()), 0.0), 1.0 - p);
  if (p > 0.0)
    for (const auto& a : v.atoms()) acc.add(a.x, p * a.mass);
  return acc.finish();
}

BoundedResult prune(const DiscreteDistribution& f, double eps) {
  if (eps < 0.0 || eps >= 1.0) throw invalid_input("prune eps outside [0,1)");
  if (eps == 0.0) return {f, 0.0};
  // Greedily drop the lightest atoms while the removed total stays <= eps.
  std::vector<std::size_t> order(f.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return f.atoms()[a].mass < f.atoms()[b].mass;
  });
  std::vector<bool> drop(f.size(), false);
  double removed = 0.0;
  std::size_t dropped = 0;
  for (std::size_t i : order) {
    double m = f.atoms()[i].mass;
    if (removed + m > eps) break;
    if (dropped + 1 == f.size()) break;  // never drop everything
    removed += m;
    drop[i] = true;
    ++dropped;
  }
  Accumulator acc(f.dim(), f.quantum());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!drop[i]) acc.add(f.atoms()[i].x, f.atoms()[i].mass);
  return {acc.finish(), removed};
}

std::complex<double> char_fn(const DiscreteDistribution& f, const Point& t) {
  if (static_cast<int>(t.size()) != f.dim())
    throw invalid_input("dimension mismatch");
  std::complex<double> sum = 0.0;
  for (const auto& a : f.atoms()) {
    double dot = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) dot += a.x[i] * t[i];
    sum += a.mass * std::complex<double>(std::cos(dot), std::sin(dot));
  }
  return sum;
}

bool is_symmetric(const DiscreteDistribution& f, double tol) {
  for (const auto& a : f.atoms()) {
    Point neg(a.x.size());
    for (std::size_t i = 0; i < a.x.size(); ++i) neg[i] = -a.x[i];
    if (std::abs(f.mass_at(neg) - a.mass) > tol) return false;
  }
  return true;
}

namespace {

// Per-axis lattice spacing if all support coordinates are (near) integer
// multiples of a common step, 0 otherwise. Euclid on doubles.
double axis_spacing(const DiscreteDistribution& f, std::size_t axis) {
  double h = 0.0;
  for (const auto& a : f.atoms()) {
    double v = std::abs(a.x[axis]);
    if (v < 1e-12) continue;
    if (h == 0.0) {
      h = v;
      continue;
    }
    // gcd(h, v) with tolerance
    double x = std::max(h, v), y = std::min(h, v);
    for (int iter = 0; iter < 64 && y > 1e-9; ++iter) {
      double r = std::fmod(x, y);
      if (r > y - 1e-9) r = 0.0;  // fmod landing just under y is a wrap
      x = y;
      y = r;
    }
    h = x;
    if (h < 1e-6) return 0.0;
  }
  return h;
}

}  // namespace

CharClassReport class_check(const DiscreteDistribution& f,
                            const ClassCheckGrid& grid) {
  CharClassReport report;
  report.is_symmetric = is_symmetric(f);
  if (!report.is_symmetric) return report;

  const int d = f.dim();
  const int ppa = std::max(2, grid.points_per_axis);
  double total = std::pow(static_cast<double>(ppa), d) *
                 static_cast<double>(f.size());
  if (total > 2e8) throw resource_limit("class_check grid too large");

  // Scan range per axis: one period for lattice supports, heuristic
  // window otherwise.
  std::vector<double> range(static_cast<std::size_t>(d));
  for (int ax = 0; ax < d; ++ax) {
    double h = axis_spacing(f, static_cast<std::size_t>(ax));
    range[static_cast<std::size_t>(ax)] =
        h > 0.0 ? std::numbers::pi / h : grid.max_abs_t;
  }

  double min_re = 1.0;  // attained at t = 0
  long checked = 0;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Point t(static_cast<std::size_t>(d));
  for (;;) {
    for (int ax = 0; ax < d; ++ax) {
      double r = range[static_cast<std::size_t>(ax)];
      t[static_cast<std::size_t>(ax)] =
          -r + 2.0 * r * idx[static_cast<std::size_t>(ax)] / (ppa - 1);
    }
    double re = 0.0;
    for (const auto& a : f.atoms()) {
      double dot = 0.0;
      for (int i = 0; i < d; ++i)
        dot += a.x[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(i)];
      re += a.mass * std::cos(dot);
    }
    min_re = std::min(min_re, re);
    ++checked;
    int ax = 0;
    while (ax < d && ++idx[static_cast<std::size_t>(ax)] == ppa) {
      idx[static_cast<std::size_t>(ax)] = 0;
      ++ax;
    }
    if (ax == d) break;
  }
  report.min_charfn_value = min_re;
  report.alpha_lower_bound = std::clamp(1.0 + min_re, 0.0, 2.0);
  report.grid_points_checked = checked;
  return report;
}

double total_variation(const DiscreteDistribution& f,
                       const DiscreteDistribution& g) {
  check_same_dim(f, g);
  double l1 = 0.0;
  for (const auto& a : f.atoms()) l1 += std::abs(a.mass - g.mass_at(a.x));
  for (const auto& b : g.atoms())
    if (f.mass_at(b.x) == 0.0) l1 += b.mass;
  return 0.5 * l1;
}

Point mean(const DiscreteDistribution& f) {
  Point m(static_cast<std::size_t>(f.dim()), 0.0);
  for (const auto& a : f.atoms())
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += a.mass * a.x[i];
  return m;
}

}  // namespace cpl
