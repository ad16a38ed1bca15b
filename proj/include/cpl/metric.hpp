#pragma once

#include <cstdint>
#include <optional>

#include "cpl/polyhedron.hpp"

namespace cpl {

enum class CertMode { exact_fixed_directions, searched };

// A distance value together with the polyhedron achieving it. Searched
// modes certify a lower bound on the supremum; exact mode is the supremum
// over the given direction set.
struct DistanceCertificate {
  double value = 0.0;
  Polyhedron witness;
  CertMode mode = CertMode::searched;
};

enum class FixedMode { exact, ascent };

struct FixedDirectionOptions {
  std::size_t max_enumerations = 2'000'000;
  int restarts = 32;  // ascent mode
  std::uint64_t seed = 1;
  int max_sweeps = 16;  // cyclic ascent passes per restart
};

// sup over P in P(t_1,...,t_m) of |G{P} - H{P}|. Exact mode enumerates all
// combinations of candidate thresholds (the attained support projections,
// plus +inf per direction); ascent mode does seeded cyclic coordinate ascent
// over the same candidate sets and certifies a lower bound.
DistanceCertificate rho_fixed_directions(const DiscreteDistribution& g,
                                         const DiscreteDistribution& h,
                                         const DirectionSet& t, FixedMode mode,
                                         const FixedDirectionOptions& opts = {});

struct SearchOptions {
  int restarts = 32;
  double perturbation_scale = 1.0;  // decays by 0.5 over 6 levels
  int decay_levels = 6;
  int tries_per_level = 4;
  std::uint64_t seed = 1;
  FixedDirectionOptions fixed;
};

// Certified lower bound on rho_m: random directions on the sphere plus the
// standard axes, refined by Gaussian perturbation hill-climbing. Optionally
// seeded with a previously found witness. Deterministic given the seed.
DistanceCertificate rho_m_search(
    const DiscreteDistribution& g, const DiscreteDistribution& h, int m,
    const SearchOptions& opts = {},
    const std::optional<Polyhedron>& seed_witness = std::nullopt);

struct KolmogorovOptions {
  int max_exact_dim = 3;
  std::size_t max_grid = 50'000'000;
};

// Exact uniform distance between multivariate distribution functions
// (axis-aligned orthants), dimensions up to the configured cap.
DistanceCertificate kolmogorov_rho(const DiscreteDistribution& g,
                                   const DiscreteDistribution& h,
                                   const KolmogorovOptions& opts = {});

}  // namespace cpl
