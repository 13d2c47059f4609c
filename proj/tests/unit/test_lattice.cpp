#include <random>

#include "doctest.h"
#include "orthodec/error.hpp"
#include "orthodec/law.hpp"
#include "orthodec/lattice.hpp"
#include "orthodec/rng.hpp"

using namespace orthodec;

TEST_CASE("partial order and lattice operations") {
  CHECK(leq({1, 2}, {1, 3}));
  CHECK_FALSE(leq({1, 2}, {0, 3}));
  CHECK(meet({1, 5}, {2, 3}) == MultiIndex{1, 3});
  CHECK(join({1, 5}, {2, 3}) == MultiIndex{2, 5});
  CHECK_THROWS_AS(leq({1}, {1, 2}), InputError);
}

TEST_CASE("order axioms hold exhaustively on a small grid") {
  std::vector<MultiIndex> grid;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) grid.push_back({a, b});
  for (const auto& x : grid) {
    CHECK(leq(x, x));
    for (const auto& y : grid) {
      if (leq(x, y) && leq(y, x)) CHECK(x == y);
      const MultiIndex m = meet(x, y);
      CHECK(leq(m, x));
      CHECK(leq(m, y));
      for (const auto& z : grid) {
        if (leq(x, y) && leq(y, z)) CHECK(leq(x, z));
        // meet is the greatest lower bound
        if (leq(z, x) && leq(z, y)) CHECK(leq(z, m));
      }
    }
  }
}

TEST_CASE("half-space membership") {
  CHECK(region_contains({1, 1}, {1, -7}));
  CHECK_FALSE(region_contains({2, 2}, {9, 1}));
  CHECK(region_contains({1, 0}, {0, 0}));
}

TEST_CASE("cube overlap weights") {
  CHECK(cube_overlap_weight(2, Rect::quadrant({0.75, 0.5}), {2, 1}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cube_overlap_weight(4, Rect::unit(2), {3, 2}) == 1.0);
  CHECK(cube_overlap_weight(2, Rect({0.5, 0.0}, {1.0, 1.0}), {1, 1}) == 0.0);
}

TEST_CASE("cube overlap weights are additive and carry total mass") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::int64_t n = 5;
  for (int trial = 0; trial < 50; ++trial) {
    const double lo0 = u(rng) * 0.5, hi0 = 0.5 + u(rng) * 0.5, cut = lo0 + (hi0 - lo0) * u(rng);
    const double lo1 = u(rng) * 0.5, hi1 = 0.5 + u(rng) * 0.5;
    const Rect whole({lo0, lo1}, {hi0, hi1});
    const Rect left({lo0, lo1}, {cut, hi1});
    const Rect right({cut, lo1}, {hi0, hi1});
    double mass = 0.0;
    for (std::int64_t i = 1; i <= n; ++i)
      for (std::int64_t j = 1; j <= n; ++j) {
        const double w = cube_overlap_weight(n, whole, {i, j});
        CHECK(std::abs(cube_overlap_weight(n, left, {i, j}) + cube_overlap_weight(n, right, {i, j}) - w) < 1e-12);
        mass += w;
      }
    CHECK(std::abs(mass - n * n * whole.volume()) < 1e-9);
  }
}

TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("innovation field is a pure function of (seed, replica, index)") {
  InnovationField a(InnovationLaw::gaussian(), 42, 3), b(InnovationLaw::gaussian(), 42, 3);
  CHECK(a.at({5, -2}) == b.at({5, -2}));
  CHECK(a.at({5, -2}) != InnovationField(InnovationLaw::gaussian(), 42, 4).at({5, -2}));
  CHECK(a.at({5, -2}) != InnovationField(InnovationLaw::gaussian(), 43, 3).at({5, -2}));
}

TEST_CASE("rademacher draws are signs with mean near zero") {
  InnovationField f(InnovationLaw::rademacher(), 9);
  const int count = 1'000'000;
  double sum = 0.0;
  for (int k = 0; k < count; ++k) {
    const double v = f.at({k});
    REQUIRE((v == 1.0 || v == -1.0));
    sum += v;
  }
  CHECK(std::abs(sum / count) < 5.0 / 1000.0);
}

TEST_CASE("innovation laws") {
  const auto g = InnovationLaw::gaussian(4.0);
  CHECK(g.stddev() == 2.0);
  CHECK(*g.abs_moment(2.0) == doctest::Approx(4.0));
  CHECK(*InnovationLaw::rademacher().abs_moment(7.0) == 1.0);
  const auto c = InnovationLaw::custom({-1.0, 0.0, 2.0}, {1.0 / 3, 1.0 / 2, 1.0 / 6});
  CHECK(c.variance() == doctest::Approx(1.0));
  CHECK(c.sup_norm() == 2.0);
  CHECK_THROWS_AS(InnovationLaw::custom({1.0}, {1.0}), InputError);
  CHECK_THROWS_AS(InnovationLaw::gaussian(-1.0), InputError);
}
