#include <doctest.h>

#include "mslift/errors.hpp"
#include "mslift/sbv.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace mslift;
using namespace mslift::testing;

namespace {
const Interval kUnit{0.0, 1.0};
Measurement zero_g() { return Measurement(SbvFunction::constant(kUnit, 0.0)); }
SbvFunction half_step() { return SbvFunction::step(kUnit, 0.5, 0.0, 1.0); }
}  // namespace

TEST_CASE("regular_energy examples") {
  CHECK(regular_energy(SbvFunction::constant(kUnit, 0.0), zero_g(), MsParams(2.0, 3.0)) == 0.0);
  CHECK(regular_energy(SbvFunction::linear(kUnit, 0.0, 1.0), zero_g(), MsParams(1.0, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(regular_energy(half_step(), zero_g(), MsParams(1.0, 1.0)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("ms_energy examples") {
  CHECK(ms_energy(SbvFunction::constant(kUnit, 0.0), zero_g(), MsParams(1.0, 1.0)) == 0.0);
  CHECK(ms_energy(half_step(), zero_g(), MsParams(1.0, 1.0)) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(ms_energy(SbvFunction::linear(kUnit, 0.0, 1.0), zero_g(), MsParams(1.0, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("the Dirichlet term carries no alpha") {
  const auto ramp = SbvFunction::linear(kUnit, 0.0, 2.0);
  CHECK(ms_energy(ramp, zero_g(), MsParams(10.0, 0.0)) == doctest::Approx(4.0));
}

TEST_CASE("jump_set examples") {
  CHECK(jump_set(SbvFunction::linear(kUnit, 0.0, 1.0)).empty());
  const auto j = jump_set(half_step());
  REQUIRE(j.size() == 1);
  CHECK(j[0].x == 0.5);
  CHECK(j[0].left == 0.0);
  CHECK(j[0].right == 1.0);
  const SbvFunction stairs(kUnit, {{{0.0, 1.0 / 3}, {0, 0}}, {{1.0 / 3, 2.0 / 3}, {1, 1}}, {{2.0 / 3, 1.0}, {2, 2}}});
  const auto s = jump_set(stairs);
  REQUIRE(s.size() == 2);
  CHECK(s[0].x < s[1].x);
  CHECK(s[0].x == doctest::Approx(1.0 / 3));
}

TEST_CASE("construction normalizes equal traces and collinear nodes") {
  const SbvFunction split(kUnit, {{{0.0, 0.4}, {0.0, 0.4}}, {{0.4, 1.0}, {0.4, 1.0}}});
  CHECK(split.pieces().size() == 1);
  CHECK(split.pieces()[0].nodes.size() == 2);
  CHECK(jump_set(split).empty());
  const SbvFunction tiny(kUnit, {{{0.0, 0.5}, {1.0, 1.0}}, {{0.5, 1.0}, {1.0 + 1e-13, 1.0}}});
  CHECK(tiny.jumps().empty());
}

TEST_CASE("construction errors name the piece") {
  CHECK_THROWS_AS(SbvFunction(kUnit, {}), ValidationError);
  CHECK_THROWS_WITH_AS(SbvFunction(kUnit, {{{0.0, 0.5}, {0, 0}}, {{0.6, 1.0}, {0, 0}}}), "piece 1: must start where piece 0 ends",
                       ValidationError);
  CHECK_THROWS_WITH_AS(SbvFunction(kUnit, {{{0.0, 0.5, 0.5, 1.0}, {0, 0, 0, 0}}}),
                       "piece 0: nodes must be strictly increasing", ValidationError);
  CHECK_THROWS_AS(SbvFunction(kUnit, {{{0.0, 1.0}, {0.0}}}), ValidationError);
  CHECK_THROWS_AS(SbvFunction(kUnit, {{{0.1, 1.0}, {0.0, 0.0}}}), ValidationError);
  CHECK_THROWS_AS(MsParams(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(MsParams(1.0, -1.0), ValidationError);
  CHECK_THROWS_AS(Domain(0, 1, 0.5, 0.5), ValidationError);
  CHECK_THROWS_AS(Domain(0, 1, 0.0, 0.5), ValidationError);
}

TEST_CASE("mismatched intervals and out-of-range traces") {
  const Measurement g(SbvFunction::constant({0.0, 2.0}, 0.0));
  CHECK_THROWS_AS(regular_energy(half_step(), g, MsParams(1, 1)), DomainMismatchError);
  CHECK_THROWS_AS(half_step().left_trace(0.0), DomainError);
  CHECK_THROWS_AS(half_step().right_trace(1.0), DomainError);
  CHECK(half_step().left_trace(0.5) == 0.0);
  CHECK(half_step().right_trace(0.5) == 1.0);
}

TEST_CASE("splice joins and cuts") {
  const auto a = SbvFunction::constant(kUnit, 0.0);
  const auto b = SbvFunction::linear(kUnit, 0.0, 2.0);
  const auto s = splice(a, b, 0.5);
  REQUIRE(s.jumps().size() == 1);
  CHECK(s.jumps()[0].right == doctest::Approx(1.0));
  const auto joined = splice(a, b, 0.5, true);
  CHECK(joined.jumps().empty());
  CHECK(same_graph(splice(b, b, 0.3), b, 1e-15));
}

TEST_CASE("Domain collar membership") {
  const Domain d(0, 1, 0.25, 0.75);
  CHECK(d.in_collar(0.25));
  CHECK(d.in_collar(0.75));
  CHECK(d.in_collar(0.1));
  CHECK_FALSE(d.in_collar(0.5));
  CHECK_FALSE(d.in_collar(0.0));
}

TEST_CASE("property: refinement invariance is exact") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = random_sbv(rng, kUnit);
    const auto g = random_sbv(rng, kUnit);
    std::vector<Piece> refined = u.pieces();
    Piece& p = refined[static_cast<std::size_t>(rng.integer(0, static_cast<int>(refined.size()) - 1))];
    const double x = 0.5 * (p.nodes[0] + p.nodes[1]);
    const double y = p.at(x);
    p.nodes.insert(p.nodes.begin() + 1, x);
    p.values.insert(p.values.begin() + 1, y);
    const SbvFunction v(kUnit, refined);
    const MsParams mp(rng.uniform(0.1, 3), rng.uniform(0, 3));
    CHECK(ms_energy(u, Measurement(g), mp) == ms_energy(v, Measurement(g), mp));
    CHECK(v.pieces().size() == u.pieces().size());
    CHECK(v.breakpoints() == u.breakpoints());
  }
}

TEST_CASE("property: traces agree with the adjacent pieces") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = random_sbv(rng, kUnit);
    for (std::size_t i = 0; i + 1 < u.pieces().size(); ++i) {
      const double x = u.pieces()[i].last_node();
      CHECK(u.left_trace(x) == u.pieces()[i].at(x));
      CHECK(u.right_trace(x) == u.pieces()[i + 1].at(x));
    }
  }
}

TEST_CASE("property: regular energy is quadratic and matches quadrature") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = random_sbv(rng, kUnit);
    const auto g = random_sbv(rng, kUnit);
    const MsParams mp(rng.uniform(0.1, 3), rng.uniform(0, 3));
    const double e = regular_energy(u, Measurement(g), mp);
    CHECK(e == doctest::Approx(oracle_regular_energy(u, g, mp.beta)).epsilon(1e-11));

    const double c = rng.uniform(0, 3);
    std::vector<Piece> cu = u.pieces(), cg = g.pieces();
    for (auto& p : cu) for (double& v : p.values) v *= c;
    for (auto& p : cg) for (double& v : p.values) v *= c;
    const double scaled = regular_energy(SbvFunction(kUnit, cu), Measurement(SbvFunction(kUnit, cg)), mp);
    CHECK(scaled == doctest::Approx(c * c * e).epsilon(1e-11).scale(1.0));

    CHECK(ms_energy(u, Measurement(g), mp) == e + mp.alpha * static_cast<double>(jump_set(u).size()));
    CHECK(jump_set(u).size() == oracle_jump_count(u));
  }
}
