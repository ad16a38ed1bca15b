#include "cpl/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cpl {

namespace {

// Support atoms of G and H merged into one signed list: G carries +mass,
// H carries -mass. |sum over a set| is then |G{set} - H{set}|.
struct SignedAtom {
  const Point* x;
  double weight;
};

std::vector<SignedAtom> signed_atoms(const DiscreteDistribution& g,
                                     const DiscreteDistribution& h) {
  std::vector<SignedAtom> out;
  out.reserve(g.size() + h.size());
  for (const auto& a : g.atoms()) out.push_back({&a.x, a.mass});
  for (const auto& a : h.atoms()) out.push_back({&a.x, -a.mass});
  return out;
}

// Projection values are snapped to the coarser of the two distributions'
// coordinate quanta so that support points that differ only by accumulated
// round-off (below the dedup quantum) project to identical values. The
// half-quantum offset puts every threshold strictly between adjacent grid
// cells, so raw-coordinate membership tests agree with the snapped sweep.
double snap_half(double x, double q) { return (std::round(x / q) + 0.5) * q; }

// Projections of every signed atom onto every direction.
struct ProjectedProblem {
  std::vector<double> weights;                 // per atom
  std::vector<std::vector<double>> proj;       // [direction][atom]
  std::vector<std::vector<double>> candidates; // per direction, sorted distinct
};

ProjectedProblem project_problem(const DiscreteDistribution& g,
                                 const DiscreteDistribution& h,
                                 const DirectionSet& t) {
  if (g.dim() != h.dim() || g.dim() != t.dim())
    throw invalid_input("dimension mismatch");
  auto atoms = signed_atoms(g, h);
  const double q = std::max(g.quantum(), h.quantum());
  ProjectedProblem p;
  p.weights.reserve(atoms.size());
  for (const auto& a : atoms) p.weights.push_back(a.weight);
  p.proj.resize(t.size());
  p.candidates.resize(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    auto& pr = p.proj[j];
    pr.reserve(atoms.size());
    for (const auto& a : atoms)
      pr.push_back(snap_half(dot(*a.x, t.directions()[j]), q));
    auto c = pr;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    c.push_back(kInf);
    p.candidates[j] = std::move(c);
  }
  return p;
}

double eval_thresholds(const ProjectedProblem& p,
                       const std::vector<double>& thresholds) {
  double sum = 0.0;
  const std::size_t n = p.weights.size();
  const std::size_t m = p.proj.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool in = true;
    for (std::size_t j = 0; j < m; ++j)
      if (p.proj[j][i] > thresholds[j]) {
        in = false;
        break;
      }
    if (in) sum += p.weights[i];
  }
  return std::abs(sum);
}

Polyhedron make_witness(const DirectionSet& t,
                        const std::vector<double>& thresholds) {
  std::vector<Halfspace> hs;
  hs.reserve(t.size());
  for (std::size_t j = 0; j < t.size(); ++j)
    hs.push_back({t.directions()[j], thresholds[j]});
  return Polyhedron(t.dim(), std::move(hs));
}

DistanceCertificate exact_fixed(const DirectionSet& t,
                                const ProjectedProblem& p,
                                const FixedDirectionOptions& opts) {
  double combos = 1.0;
  for (const auto& c : p.candidates) combos *= static_cast<double>(c.size());
  if (combos > static_cast<double>(opts.max_enumerations))
    throw resource_limit("fixed-direction enumeration exceeds cap");

  const std::size_t m = p.proj.size();
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> th(m);
  double best = -1.0;
  std::vector<double> best_th(m, kInf);
  for (;;) {
    for (std::size_t j = 0; j < m; ++j) th[j] = p.candidates[j][idx[j]];
    double v = eval_thresholds(p, th);
    if (v > best) {
      best = v;
      best_th = th;
    }
    std::size_t j = 0;
    while (j < m && ++idx[j] == p.candidates[j].size()) {
      idx[j] = 0;
      ++j;
    }
    if (j == m) break;
  }
  return {best, make_witness(t, best_th), CertMode::exact_fixed_directions};
}

// One exact sweep over thresholds of direction `j`, all others fixed.
// Returns the best threshold and value.
std::pair<double, double> sweep_direction(const ProjectedProblem& p,
                                          std::size_t j,
                                          const std::vector<double>& th) {
  const std::size_t n = p.weights.size();
  std::vector<std::pair<double, double>> inside;  // (proj_j, weight)
  inside.reserve(n);
  double min_proj = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    bool in = true;
    for (std::size_t q = 0; q < p.proj.size(); ++q) {
      if (q == j) continue;
      if (p.proj[q][i] > th[q]) {
        in = false;
        break;
      }
    }
    if (in) {
      inside.emplace_back(p.proj[j][i], p.weights[i]);
      min_proj = std::min(min_proj, p.proj[j][i]);
    }
  }
  if (inside.empty()) return {kInf, 0.0};
  std::sort(inside.begin(), inside.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Prefix sums over groups of equal projection values; the empty prefix
  // (threshold below every projection) counts too.
  double best_v = 0.0;
  double best_b = min_proj - 1.0;
  double run = 0.0;
  std::size_t i = 0;
  while (i < inside.size()) {
    double v = inside[i].first;
    while (i < inside.size() && inside[i].first == v) run += inside[i++].second;
    if (std::abs(run) > best_v) {
      best_v = std::abs(run);
      best_b = v;
    }
  }
  return {best_b, best_v};
}

DistanceCertificate ascent_fixed(const DirectionSet& t,
                                 const ProjectedProblem& p,
                                 const FixedDirectionOptions& opts) {
  const std::size_t m = p.proj.size();
  std::mt19937_64 rng(opts.seed);
  double best = -1.0;
  std::vector<double> best_th(m, kInf);
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    std::vector<double> th(m);
    if (r == 0) {
      th.assign(m, kInf);  // start from the whole space once
    } else {
      for (std::size_t j = 0; j < m; ++j) {
        std::uniform_int_distribution<std::size_t> pick(
            0, p.candidates[j].size() - 1);
        th[j] = p.candidates[j][pick(rng)];
      }
    }
    double cur = eval_thresholds(p, th);
    for (int pass = 0; pass < opts.max_sweeps; ++pass) {
      bool improved = false;
      for (std::size_t j = 0; j < m; ++j) {
        auto [b, v] = sweep_direction(p, j, th);
        if (v > cur + 1e-15) {
          cur = v;
          th[j] = b;
          improved = true;
        }
      }
      if (!improved) break;
    }
    if (cur > best) {
      best = cur;
      best_th = th;
    }
  }
  return {best, make_witness(t, best_th), CertMode::searched};
}

}  // namespace

DistanceCertificate rho_fixed_directions(const DiscreteDistribution& g,
                                         const DiscreteDistribution& h,
                                         const DirectionSet& t, FixedMode mode,
                                         const FixedDirectionOptions& opts) {
  auto p = project_problem(g, h, t);
  return mode == FixedMode::exact ? exact_fixed(t, p, opts)
                                  : ascent_fixed(t, p, opts);
}

namespace {

Point random_unit_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Point v(static_cast<std::size_t>(dim));
  for (;;) {
    for (double& c : v) c = gauss(rng);
    double n = norm(v);
    if (n > 1e-8) {
      for (double& c : v) c /= n;
      return v;
    }
  }
}

DistanceCertificate evaluate_directions(const DiscreteDistribution& g,
                                        const DiscreteDistribution& h,
                                        const DirectionSet& t,
                                        const FixedDirectionOptions& fopts) {
  auto p = project_problem(g, h, t);
  double combos = 1.0;
  for (const auto& c : p.candidates) combos *= static_cast<double>(c.size());
  if (combos <= 20'000.0) {
    auto cert = exact_fixed(t, p, fopts);
    cert.mode = CertMode::searched;  // exact only over this direction set
    return cert;
  }
  return ascent_fixed(t, p, fopts);
}

}  // namespace

DistanceCertificate rho_m_search(const DiscreteDistribution& g,
                                 const DiscreteDistribution& h, int m,
                                 const SearchOptions& opts,
                                 const std::optional<Polyhedron>& seed_witness) {
  if (g.dim() != h.dim()) throw invalid_input("dimension mismatch");
  if (m <= 0) throw invalid_input("m must be positive");
  const int d = g.dim();
  std::mt19937_64 rng(opts.seed);

  std::optional<DistanceCertificate> best;
  auto consider_cert = [&](DistanceCertificate cert) {
    if (!best || cert.value > best->value) best = std::move(cert);
  };

  // A previously found witness is a feasible polyhedron: its value is a
  // floor for the search result.
  if (seed_witness) {
    double v = std::abs(measure(g, *seed_witness) - measure(h, *seed_witness));
    consider_cert({v, *seed_witness, CertMode::searched});
  }

  std::vector<DirectionSet> pool;
  {
    // Standard axes, cycled to m directions.
    std::vector<Point> axes;
    for (int j = 0; j < m; ++j) {
      Point e(static_cast<std::size_t>(d), 0.0);
      e[static_cast<std::size_t>(j % d)] = 1.0;
      axes.push_back(std::move(e));
    }
    pool.emplace_back(d, std::move(axes));
  }
  if (seed_witness) {
    std::vector<Point> dirs;
    for (const auto& hs : seed_witness->halfspaces())
      dirs.push_back(hs.direction);
    while (static_cast<int>(dirs.size()) < m) dirs.push_back(dirs.back());
    pool.emplace_back(d, std::move(dirs));
  }
  for (int r = 0; r < opts.restarts; ++r) {
    std::vector<Point> dirs;
    for (int j = 0; j < m; ++j) dirs.push_back(random_unit_vector(d, rng));
    pool.emplace_back(d, std::move(dirs));
  }

  FixedDirectionOptions fopts = opts.fixed;
  for (const auto& t : pool) {
    fopts.seed = rng();
    consider_cert(evaluate_directions(g, h, t, fopts));
  }

  // Gaussian perturbation hill-climbing around the best direction set.
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int level = 0; level < opts.decay_levels; ++level) {
    double sigma = opts.perturbation_scale * std::pow(0.5, level);
    for (int tr = 0; tr < opts.tries_per_level; ++tr) {
      std::vector<Point> dirs;
      for (const auto& hs : best->witness.halfspaces()) {
        Point v = hs.direction;
        for (double& c : v) c += sigma * gauss(rng);
        double n = norm(v);
        if (n < 1e-8) v = random_unit_vector(d, rng);
        else
          for (double& c : v) c /= n;
        dirs.push_back(std::move(v));
      }
      while (static_cast<int>(dirs.size()) < m)
        dirs.push_back(random_unit_vector(d, rng));
      fopts.seed = rng();
      consider_cert(evaluate_directions(g, h, DirectionSet(d, dirs), fopts));
    }
  }
  best->mode = CertMode::searched;
  return *best;
}

DistanceCertificate kolmogorov_rho(const DiscreteDistribution& g,
                                   const DiscreteDistribution& h,
                                   const KolmogorovOptions& opts) {
  if (g.dim() != h.dim()) throw invalid_input("dimension mismatch");
  const int d = g.dim();
  if (d > opts.max_exact_dim)
    throw resource_limit("dimension exceeds exact Kolmogorov cap");

  std::vector<Point> axes;
  for (int j = 0; j < d; ++j) {
    Point e(static_cast<std::size_t>(d), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    axes.push_back(std::move(e));
  }
  DirectionSet basis(d, std::move(axes));

  if (d == 1) {
    // Merged CDF sweep.
    auto atoms = signed_atoms(g, h);
    const double q = std::max(g.quantum(), h.quantum());
    std::vector<std::pair<double, double>> pts;
    pts.reserve(atoms.size());
    for (const auto& a : atoms)
      pts.emplace_back(snap_half((*a.x)[0], q), a.weight);
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double best = 0.0, best_b = kInf, run = 0.0;
    std::size_t i = 0;
    while (i < pts.size()) {
      double v = pts[i].first;
      while (i < pts.size() && pts[i].first == v) run += pts[i++].second;
      if (std::abs(run) > best) {
        best = std::abs(run);
        best_b = v;
      }
    }
    return {best, make_witness(basis, {best_b}),
            CertMode::exact_fixed_directions};
  }

  auto p = project_problem(g, h, basis);
  double combos = 1.0;
  for (const auto& c : p.candidates) combos *= static_cast<double>(c.size());
  if (combos * static_cast<double>(p.weights.size()) >
      static_cast<double>(opts.max_grid))
    throw resource_limit("Kolmogorov grid exceeds cap");
  FixedDirectionOptions fopts;
  fopts.max_enumerations = opts.max_grid;
  return exact_fixed(basis, p, fopts);
}

}  // namespace cpl
