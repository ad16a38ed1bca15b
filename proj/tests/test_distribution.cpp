#include <cmath>
#include <random>

#include "cpl/distribution.hpp"
#include "doctest.h"

using namespace cpl;

namespace {

DiscreteDistribution rademacher() {
  return DiscreteDistribution(1, {{{-1.0}, 0.5}, {{1.0}, 0.5}});
}

DiscreteDistribution lazy_rademacher() {
  return DiscreteDistribution(1, {{{-1.0}, 0.25}, {{0.0}, 0.5}, {{1.0}, 0.25}});
}

DiscreteDistribution random_integer_dist(std::mt19937_64& rng, int span = 5) {
  std::uniform_int_distribution<int> loc(-span, span);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  std::vector<Atom> atoms;
  int k = 2 + static_cast<int>(rng() % 4);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double m = w(rng);
    atoms.push_back({{static_cast<double>(loc(rng))}, m});
    total += m;
  }
  for (auto& a : atoms) a.mass /= total;
  return DiscreteDistribution(1, std::move(atoms));
}

}  // namespace

TEST_CASE("construction merges quantized duplicates, keeps sorted order") {
  DiscreteDistribution f(1, {{{1.0}, 0.25},
                             {{1.0 + 1e-12}, 0.25},  // same 1e-9 cell
                             {{-1.0}, 0.5}});
  REQUIRE(f.size() == 2);
  CHECK(f.atoms()[0].x[0] == -1.0);
  CHECK(f.atoms()[1].x[0] == 1.0);  // first-seen representative
  CHECK(f.atoms()[1].mass == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.mass_at({1.0}) == doctest::Approx(0.5));
  CHECK(f.mass_at({2.0}) == 0.0);
}

TEST_CASE("construction validates input") {
  CHECK_THROWS_AS(DiscreteDistribution(1, {{{0.0}, 0.5}}), invalid_input);
  CHECK_THROWS_AS(DiscreteDistribution(1, {{{0.0}, -0.2}, {{1.0}, 1.2}}),
                  invalid_input);
  CHECK_THROWS_AS(DiscreteDistribution(2, {{{0.0}, 1.0}}), invalid_input);
  CHECK_THROWS_AS(DiscreteDistribution(0, {}), invalid_input);
}

TEST_CASE("convolution of two Rademachers") {
  auto f = convolve(rademacher(), rademacher());
  REQUIRE(f.size() == 3);
  CHECK(f.mass_at({-2.0}) == doctest::Approx(0.25));
  CHECK(f.mass_at({0.0}) == doctest::Approx(0.5));
  CHECK(f.mass_at({2.0}) == doctest::Approx(0.25));
}

TEST_CASE("convolution with a point mass translates") {
  auto f = convolve(lazy_rademacher(), point_mass({3.0}));
  CHECK(f.mass_at({2.0}) == doctest::Approx(0.25));
  CHECK(f.mass_at({3.0}) == doctest::Approx(0.5));
  CHECK(f.mass_at({4.0}) == doctest::Approx(0.25));
}

TEST_CASE("convolution is commutative and associative") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_integer_dist(rng);
    auto b = random_integer_dist(rng);
    auto c = random_integer_dist(rng);
    CHECK(total_variation(convolve(a, b), convolve(b, a)) <= 1e-14);
    CHECK(total_variation(convolve(convolve(a, b), c),
                          convolve(a, convolve(b, c))) <= 1e-13);
  }
}

TEST_CASE("origin mass is the convolution identity") {
  std::mt19937_64 rng(12);
  auto f = random_integer_dist(rng);
  CHECK(total_variation(convolve(f, origin_mass(1)), f) == 0.0);
}

TEST_CASE("power matches repeated convolution, exponent additivity") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_integer_dist(rng, 3);
    auto by_repeat = origin_mass(1);
    for (int n = 0; n <= 6; ++n) {
      CHECK(total_variation(power(f, n), by_repeat) <= 1e-12);
      by_repeat = convolve(by_repeat, f);
    }
    CHECK(total_variation(power(f, 5), convolve(power(f, 2), power(f, 3))) <=
          1e-12);
  }
  CHECK(total_variation(power(rademacher(), 0), origin_mass(1)) == 0.0);
}

TEST_CASE("pruned power reports a valid total-variation bound") {
  auto f = lazy_rademacher();
  auto exact = power(f, 64);
  auto pruned = power(f, 64, 1e-10);
  CHECK(pruned.error_bound <= 1e-8);
  CHECK(total_variation(exact, pruned.dist) <= pruned.error_bound + 1e-12);
}

TEST_CASE("compound Poisson of a point mass is the Poisson law") {
  const double alpha = 2.5;
  auto r = compound_poisson(alpha, point_mass({1.0}), 1e-12);
  CHECK(r.error_bound <= 1e-12);
  double total = 0.0;
  for (int k = 0; k <= 25; ++k) {
    double expect =
        std::exp(-alpha + k * std::log(alpha) - std::lgamma(k + 1.0));
    CHECK(r.dist.mass_at({static_cast<double>(k)}) ==
          doctest::Approx(expect).epsilon(1e-9));
    total += r.dist.mass_at({static_cast<double>(k)});
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("compound Poisson semigroup identity in the rate") {
  auto h = lazy_rademacher();
  const double tol = 1e-10;
  for (int n : {2, 8}) {
    auto lhs = compound_poisson(static_cast<double>(n), h, tol);
    auto rhs = power(compound_poisson(1.0, h, tol).dist, n);
    CHECK(total_variation(lhs.dist, rhs) <= 10.0 * n * tol);
  }
}

TEST_CASE("compound Poisson with mass at zero in the jump law") {
  // Jump law (1-p)E + p delta_1 gives a plain Poisson(alpha*p) law.
  auto jump = mixture(0.3, point_mass({1.0}));
  auto r = compound_poisson(2.0, jump, 1e-12);
  const double lam = 2.0 * 0.3;
  for (int k = 0; k <= 10; ++k) {
    double expect = std::exp(-lam + k * std::log(lam) - std::lgamma(k + 1.0));
    CHECK(r.dist.mass_at({static_cast<double>(k)}) ==
          doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("compound Poisson handles a large rate") {
  auto r = compound_poisson(1024.0, lazy_rademacher(), 1e-12);
  CHECK(r.error_bound <= 1e-12);
  double total = 0.0;
  for (const auto& a : r.dist.atoms()) total += a.mass;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(is_symmetric(r.dist, 1e-9));
}

TEST_CASE("mixture splits mass between the origin and V") {
  auto f = mixture(0.25, point_mass({2.0}));
  CHECK(f.mass_at({0.0}) == doctest::Approx(0.75));
  CHECK(f.mass_at({2.0}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(mixture(-0.1, point_mass({1.0})), invalid_input);
  CHECK_THROWS_AS(mixture(1.1, point_mass({1.0})), invalid_input);
}

TEST_CASE("prune drops small atoms and reports the removed mass") {
  DiscreteDistribution f(
      1, {{{0.0}, 0.6}, {{1.0}, 0.3999}, {{2.0}, 5e-5}, {{3.0}, 5e-5}});
  auto r = prune(f, 1e-3);
  CHECK(r.dist.size() == 2);
  CHECK(r.error_bound == doctest::Approx(1e-4).epsilon(1e-9));
  double total = 0.0;
  for (const auto& a : r.dist.atoms()) total += a.mass;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // Never drops everything, even with a budget covering every atom.
  auto keep = prune(point_mass({1.0}), 0.99);
  CHECK(keep.dist.size() == 1);
  CHECK_THROWS_AS(prune(point_mass({1.0}), 1.5), invalid_input);
}

TEST_CASE("characteristic function values and product rule") {
  auto f = rademacher();
  for (double t : {0.0, 0.3, 1.7}) {
    auto v = char_fn(f, {t});
    CHECK(v.real() == doctest::Approx(std::cos(t)).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-12));
  }
  std::mt19937_64 rng(17);
  auto a = random_integer_dist(rng);
  auto b = random_integer_dist(rng);
  auto ab = convolve(a, b);
  for (double t : {0.1, 0.9, 2.3}) {
    auto lhs = char_fn(ab, {t});
    auto rhs = char_fn(a, {t}) * char_fn(b, {t});
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("symmetry detection") {
  CHECK(is_symmetric(rademacher()));
  CHECK(is_symmetric(lazy_rademacher()));
  CHECK(is_symmetric(origin_mass(1)));
  CHECK_FALSE(is_symmetric(point_mass({1.0})));
  CHECK_FALSE(is_symmetric(
      DiscreteDistribution(1, {{{-1.0}, 0.4}, {{1.0}, 0.6}})));
}

TEST_CASE("class check on the named families") {
  auto r1 = class_check(rademacher());
  CHECK(r1.is_symmetric);
  CHECK(r1.alpha_lower_bound == doctest::Approx(0.0).epsilon(1e-6));

  auto r2 = class_check(lazy_rademacher());
  CHECK(r2.is_symmetric);
  // Characteristic function (1 + cos t)/2 >= 0, minimum 0 at t = pi.
  CHECK(r2.alpha_lower_bound == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r2.min_charfn_value == doctest::Approx(0.0).epsilon(1e-6));

  auto r3 = class_check(origin_mass(1));
  CHECK(r3.is_symmetric);
  CHECK(r3.alpha_lower_bound == 2.0);  // charfn identically 1, clipped

  auto r4 = class_check(point_mass({1.0}));
  CHECK_FALSE(r4.is_symmetric);
}

TEST_CASE("class check bound never rises under grid refinement") {
  // Nested grids can only find smaller minima, so the certified bound is
  // monotone non-increasing as the grid is refined.
  DiscreteDistribution f(1, {{{-2.0}, 0.2}, {{-1.0}, 0.15}, {{0.0}, 0.3},
                             {{1.0}, 0.15}, {{2.0}, 0.2}});
  // points_per_axis p places p points inclusive of both endpoints, so
  // p -> 2p - 1 halves the step and nests the grids.
  double prev = 2.0;
  for (int pts : {64, 127, 253, 505, 1009, 2017}) {
    ClassCheckGrid grid;
    grid.points_per_axis = pts;
    double bound = class_check(f, grid).alpha_lower_bound;
    CHECK(bound <= prev + 1e-12);
    prev = bound;
  }
}

TEST_CASE("total variation and mean") {
  CHECK(total_variation(rademacher(), rademacher()) == 0.0);
  CHECK(total_variation(point_mass({0.0}), point_mass({1.0})) ==
        doctest::Approx(1.0));
  CHECK(total_variation(rademacher(), point_mass({1.0})) ==
        doctest::Approx(0.5));
  CHECK(mean(rademacher())[0] == doctest::Approx(0.0));
  CHECK(mean(point_mass({3.0, -1.0}))[0] == doctest::Approx(3.0));
  CHECK(mean(point_mass({3.0, -1.0}))[1] == doctest::Approx(-1.0));
}

TEST_CASE("resource limits surface as resource_limit") {
  Limits tiny;
  tiny.max_pair_products = 4;
  auto f = lazy_rademacher();
  CHECK_THROWS_AS(convolve(f, f, tiny), resource_limit);
  Limits small_atoms;
  small_atoms.max_atoms = 3;
  CHECK_THROWS_AS(power(f, 16, small_atoms), resource_limit);
}

TEST_CASE("mass is conserved along convolution chains") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_integer_dist(rng, 4);
    auto g = power(f, 9);
    double total = 0.0;
    for (const auto& a : g.atoms()) total += a.mass;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-11));
  }
}
