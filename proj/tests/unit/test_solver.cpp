#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mslift/decompose.hpp"
#include "mslift/errors.hpp"
#include "mslift/solver.hpp"
#include "support/generators.hpp"

using namespace mslift;
using namespace mslift::testing;

namespace {
const Interval kUnit{0.0, 1.0};
const Domain kDomain(0.0, 1.0, 0.25, 0.75);

Measurement zero() { return Measurement(SbvFunction::constant(kUnit, 0)); }

std::optional<DirichletSpec> random_spec(Rng& rng) {
  if (rng.chance(0.5)) return std::nullopt;
  return DirichletSpec(kDomain, random_sbv(rng, kUnit, {.max_pieces = 3, .max_inner_nodes = 1}));
}
}  // namespace

TEST_CASE("minimize examples") {
  {
    const Measurement g(SbvFunction::constant(kUnit, 0.7));
    const auto r = minimize(g, MsParams(1, 1), std::nullopt, 16);
    CHECK(same_graph(r.u, SbvFunction::constant(kUnit, 0.7), 1e-12));
    CHECK(r.energy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.jumps.empty());
  }
  {
    const DirichletSpec spec(kDomain, SbvFunction::step(kUnit, 0.5, 0, 1));
    const auto r = minimize(zero(), MsParams(1, 0), spec, 9);
    CHECK(r.jumps.size() == 1);
    CHECK(r.energy == doctest::Approx(1.0));
    const auto ramp = SbvFunction(kUnit, {{{0, 0.25, 0.75, 1}, {0, 0, 1, 1}}});
    CHECK(ms_energy(ramp, zero(), MsParams(1, 0)) == doctest::Approx(2.0));
    CHECK(r.u.left_trace(0.1) == 0.0);
    CHECK(r.u.right_trace(0.9) == 1.0);
  }
}

TEST_CASE("minimize: jump or no jump on a unit step") {
  const Measurement g(SbvFunction::step(kUnit, 0.5, 0, 1));
  const MsParams smooth(1e6, 1);
  const auto r0 = minimize(g, smooth, std::nullopt, 65);
  REQUIRE(r0.jumps.empty());
  // Crossover: a jump at 1/2 fits g exactly, so it costs alpha alone.
  const double crossover = ms_energy(r0.u, g, smooth);
  double lo = 1e-3, hi = 10.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (minimize(g, MsParams(mid, 1), std::nullopt, 65).jumps.empty() ? hi : lo) = mid;
  }
  CHECK(lo == doctest::Approx(crossover).epsilon(1e-9));
  CHECK(minimize(g, MsParams(0.9 * crossover, 1), std::nullopt, 65).jumps.size() == 1);
  CHECK(minimize(g, MsParams(1.1 * crossover, 1), std::nullopt, 65).jumps.empty());
}

TEST_CASE("minimize input checks") {
  CHECK_THROWS_AS(minimize(zero(), MsParams(1, 1), std::nullopt, 3), ValidationError);
  CHECK_THROWS_AS(brute_force_minimize(zero(), MsParams(1, 1), std::nullopt, kBruteForceMaxNodes + 1), SizeLimitError);
  const Measurement other(SbvFunction::constant({0, 2}, 0));
  CHECK_THROWS_AS(minimize(other, MsParams(1, 1), DirichletSpec(kDomain, SbvFunction::constant(kUnit, 0)), 8),
                  DomainMismatchError);
}

TEST_CASE("brute_force_minimize examples") {
  const auto r = brute_force_minimize(zero(), MsParams(1, 1), std::nullopt, 10);
  CHECK(same_graph(r.u, SbvFunction::constant(kUnit, 0), 1e-12));
  const Measurement two_step(SbvFunction(kUnit, {{{0, 1.0 / 3}, {0, 0}}, {{1.0 / 3, 2.0 / 3}, {2, 2}}, {{2.0 / 3, 1}, {-1, -1}}}));
  const auto b = brute_force_minimize(two_step, MsParams(1e-4, 10), std::nullopt, 10);
  CHECK(b.jumps.size() == 2);
}

TEST_CASE("property: dynamic programming equals exhaustive search") {
  Rng rng(51);
  for (int trial = 0; trial < 120; ++trial) {
    const Measurement g(random_sbv(rng, kUnit));
    const MsParams p(rng.uniform(0.01, 2), rng.chance(0.2) ? 0.0 : rng.uniform(0, 8));
    const auto spec = random_spec(rng);
    const auto n = static_cast<std::size_t>(rng.integer(4, 12));
    const auto dp = minimize(g, p, spec, n);
    const auto bf = brute_force_minimize(g, p, spec, n);
    CHECK(dp.energy == doctest::Approx(bf.energy).epsilon(1e-10));
    CHECK(std::abs(dp.energy - bf.energy) <= 1e-10 * (1 + bf.energy));
    CHECK(dp.energy == doctest::Approx(ms_energy(dp.u, g, p)).epsilon(1e-10));
  }
}

TEST_CASE("property: minimizer dominates simple candidates") {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 33;
    // g with breakpoints on the grid is itself a candidate.
    const auto g = random_sbv(rng, kUnit, {.max_pieces = 4, .max_inner_nodes = 0, .slots = 32});
    const Measurement m(g);
    const MsParams p(rng.uniform(0.01, 2), rng.uniform(0, 5));
    const double f = minimize(m, p, std::nullopt, n).energy;
    const double mean = [&] {
      double s = 0.0;
      for (const auto& pc : g.pieces()) s += 0.5 * (pc.first_value() + pc.last_value()) * (pc.last_node() - pc.first_node());
      return s;
    }();
    CHECK(f <= ms_energy(SbvFunction::constant(kUnit, 0), m, p) + 1e-9);
    CHECK(f <= ms_energy(SbvFunction::constant(kUnit, mean), m, p) + 1e-9);
    CHECK(f <= ms_energy(g, m, p) + 1e-9);
  }
}

TEST_CASE("property: jump count is non-increasing in alpha") {
  Rng rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    const Measurement g(random_sbv(rng, kUnit, {.value_step = 0.5}));
    const double beta = rng.uniform(0.5, 20);
    std::size_t prev = SIZE_MAX;
    for (double alpha : {0.001, 0.01, 0.05, 0.1, 0.3, 1.0, 3.0, 10.0}) {
      const auto k = minimize(g, MsParams(alpha, beta), std::nullopt, 40).jumps.size();
      CHECK(k <= prev);
      prev = k;
    }
  }
}

TEST_CASE("perturb_inside contract") {
  const auto u = minimize(Measurement(SbvFunction::step(kUnit, 0.4, 0, 1)), MsParams(0.1, 4), std::nullopt, 21).u;
  CHECK(perturb_inside(u, kDomain, 1, 0).empty());
  const auto comps = perturb_inside(u, kDomain, 7, 50);
  REQUIRE(comps.size() == 50);
  const auto reference = restrict_outside(GraphCombination::single(u), kDomain);
  const LiftParams lp{MsParams(0.1, 4), Measurement(SbvFunction::step(kUnit, 0.4, 0, 1))};
  std::size_t swaps = 0;
  for (const auto& t : comps) {
    CHECK(t.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(restrictions_equal(restrict_outside(t, kDomain), reference, 0.0));
    const auto d = decompose(t, lp);
    swaps += std::count_if(d.provenance.begin(), d.provenance.end(),
                           [](const ProvenanceStep& s) { return s.kind == StepKind::kAdjacentSwap; });
  }
  CHECK(swaps >= 1);

  const auto again = perturb_inside(u, kDomain, 7, 50);
  for (std::size_t k = 0; k < comps.size(); ++k) CHECK(current_equal(comps[k], again[k], 0.0));
  CHECK_THROWS_AS(perturb_inside(SbvFunction::constant({0, 2}, 0), kDomain, 1, 1), DomainMismatchError);
}
