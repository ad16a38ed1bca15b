#include <cmath>
#include <random>

#include "cpl/polyhedron.hpp"
#include "cpl/projection.hpp"
#include "doctest.h"

using namespace cpl;

namespace {

Point random_unit(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Point v(static_cast<std::size_t>(d));
  for (double& c : v) c = gauss(rng);
  double n = norm(v);
  for (double& c : v) c /= n;
  return v;
}

}  // namespace

TEST_CASE("halfspace directions must be unit vectors") {
  CHECK_NOTHROW(Polyhedron(2, {{{1.0, 0.0}, 1.0}}));
  CHECK_THROWS_AS(Polyhedron(2, {{{2.0, 0.0}, 1.0}}), invalid_input);
  CHECK_THROWS_AS(Polyhedron(2, {{{1.0}, 1.0}}), invalid_input);
  CHECK_THROWS_AS(Polyhedron(0, {}), invalid_input);
}

TEST_CASE("containment uses closed inequalities") {
  Polyhedron p(1, {{{1.0}, 2.0}});
  CHECK(contains(p, {2.0}));
  CHECK(contains(p, {-100.0}));
  CHECK_FALSE(contains(p, {2.0000001}));

  Polyhedron whole(1, {{{1.0}, kInf}});
  CHECK(contains(whole, {1e12}));
}

TEST_CASE("measure of simple polyhedra") {
  DiscreteDistribution f(2, {{{-1.0, -1.0}, 0.25},
                             {{-1.0, 1.0}, 0.25},
                             {{1.0, -1.0}, 0.25},
                             {{1.0, 1.0}, 0.25}});
  Polyhedron quadrant(2, {{{1.0, 0.0}, 0.0}, {{0.0, 1.0}, 0.0}});
  CHECK(measure(f, quadrant) == doctest::Approx(0.25));
  Polyhedron half(2, {{{0.0, 1.0}, 0.0}});
  CHECK(measure(f, half) == doctest::Approx(0.5));
  const double s = 1.0 / std::sqrt(2.0);
  Polyhedron diag(2, {{{s, s}, -0.1}});
  CHECK(measure(f, diag) == doctest::Approx(0.25));  // only (-1,-1)
}

TEST_CASE("dot and norm") {
  CHECK(dot({1.0, 2.0}, {3.0, -1.0}) == doctest::Approx(1.0));
  CHECK(norm({3.0, 4.0}) == doctest::Approx(5.0));
}

TEST_CASE("orthonormal basis spans and drops dependent directions") {
  const double s2 = 1.0 / std::sqrt(2.0);
  DirectionSet t(3, {{1.0, 0.0, 0.0}, {s2, s2, 0.0}, {s2, s2, 0.0}});
  auto b = orthonormal_basis(t);
  REQUIRE(b.rank() == 2);
  for (int i = 0; i < b.rank(); ++i) {
    CHECK(norm(b.basis()[static_cast<std::size_t>(i)]) ==
          doctest::Approx(1.0).epsilon(1e-12));
    for (int j = i + 1; j < b.rank(); ++j)
      CHECK(dot(b.basis()[static_cast<std::size_t>(i)],
                b.basis()[static_cast<std::size_t>(j)]) ==
            doctest::Approx(0.0).epsilon(1e-12));
  }
  // Inner products with the generators are preserved by coordinates().
  Point x = {0.3, -0.8, 4.0};
  auto coords = b.coordinates(x);
  for (const auto& dir : t.directions()) {
    auto dc = b.coordinates(dir);
    CHECK(dot(dc, coords) == doctest::Approx(dot(dir, x)).epsilon(1e-10));
  }
}

TEST_CASE("projection merges atoms that differ only orthogonally") {
  // Two atoms with the same first coordinate merge under projection onto e1.
  DiscreteDistribution f(2, {{{1.0, 5.0}, 0.3}, {{1.0, -2.0}, 0.3},
                             {{0.0, 0.0}, 0.4}});
  ProjectionBasis b(2, {{1.0, 0.0}});
  auto g = project_distribution(f, b);
  REQUIRE(g.dim() == 1);
  REQUIRE(g.size() == 2);
  CHECK(g.mass_at({1.0}) == doctest::Approx(0.6));
  CHECK(g.mass_at({0.0}) == doctest::Approx(0.4));
}

TEST_CASE("projecting a polyhedron preserves thresholds") {
  const double s = 1.0 / std::sqrt(2.0);
  Polyhedron p(3, {{{s, s, 0.0}, 1.5}, {{1.0, 0.0, 0.0}, kInf}});
  auto b = orthonormal_basis(DirectionSet(3, {{s, s, 0.0}, {1.0, 0.0, 0.0}}));
  auto q = project_polyhedron(p, b);
  CHECK(q.dim() == b.rank());
  CHECK(q.halfspaces()[0].threshold == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(q.halfspaces()[1].threshold == kInf);
}

TEST_CASE("projecting a polyhedron off the span is refused") {
  Polyhedron p(3, {{{0.0, 0.0, 1.0}, 1.0}});
  auto b = orthonormal_basis(DirectionSet(3, {{1.0, 0.0, 0.0}}));
  CHECK_THROWS_AS(project_polyhedron(p, b), invalid_input);
}

TEST_CASE("projection identity: measures agree exactly in reduced dimension") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  const int d = 10;
  for (int trial = 0; trial < 100; ++trial) {
    int m = 1 + static_cast<int>(rng() % 3);
    std::vector<Point> dirs;
    for (int j = 0; j < m; ++j) dirs.push_back(random_unit(rng, d));
    DirectionSet t(d, dirs);
    auto basis = orthonormal_basis(t);

    std::vector<Atom> atoms;
    int k = 3 + static_cast<int>(rng() % 10);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      Point x(static_cast<std::size_t>(d));
      for (double& c : x) c = unif(rng);
      double w = 0.05 + std::abs(unif(rng));
      atoms.push_back({std::move(x), w});
      total += w;
    }
    for (auto& a : atoms) a.mass /= total;
    DiscreteDistribution f(d, std::move(atoms));

    std::vector<Halfspace> hs;
    for (const auto& dir : dirs) hs.push_back({dir, unif(rng)});
    Polyhedron p(d, std::move(hs));

    auto pf = project_distribution(f, basis);
    auto pp = project_polyhedron(p, basis);
    CHECK(std::abs(measure(f, p) - measure(pf, pp)) <= 1e-12);
    for (const auto& a : f.atoms())
      CHECK(contains(p, a.x) == contains(pp, basis.coordinates(a.x)));
  }
}

TEST_CASE("direction sets validate dimensions") {
  CHECK_THROWS_AS(DirectionSet(2, {{1.0, 0.0, 0.0}}), invalid_input);
  CHECK_THROWS_AS(DirectionSet(2, {}), invalid_input);
}
