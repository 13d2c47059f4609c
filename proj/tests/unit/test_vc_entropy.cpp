#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "orthodec/error.hpp"
#include "orthodec/vc_entropy.hpp"

using namespace orthodec;

TEST_CASE("picked counts on the line") {
  CHECK(picked_count(SetClass::quadrants(1), {{0.3}, {0.7}}) == 3);
  CHECK(picked_count(SetClass::boxes(1), {{0.3}, {0.7}}) == 4);
  CHECK(picked_count(SetClass::quadrants(2), {}) == 1);
  CHECK(picked_count(SetClass::explicit_list(1, {std::nullopt}), {{0.5}}) == 1);
}

TEST_CASE("picked counts never exceed the power set") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cell(1, 7);
  for (const SetClass& c : {SetClass::quadrants(2), SetClass::boxes(2)}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Point> pts(1 + trial % 6);
      for (auto& p : pts) p = {cell(rng) / 8.0, cell(rng) / 8.0};
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      CHECK(picked_count(c, pts) <= (std::size_t{1} << pts.size()));
    }
  }
}

TEST_CASE("VC indices of rectangle classes") {
  const VcResult q1 = vc_index(SetClass::quadrants(1));
  CHECK(q1.index == 2);
  CHECK(q1.exact);
  CHECK(q1.witness.size() == 1);
  CHECK(vc_index(SetClass::quadrants(2)).index == 3);
  const VcResult b1 = vc_index(SetClass::boxes(1));
  CHECK(b1.index == 3);
  REQUIRE(b1.witness.size() == 2);
  CHECK(picked_count(SetClass::boxes(1), b1.witness) == 4);
  const VcResult b2 = vc_index(SetClass::boxes(2), 6);
  CHECK(b2.exact);
  CHECK(b2.index == 5);
  CHECK(vc_index(SetClass::explicit_list(2, {std::nullopt})).index == 1);
  const VcResult capped = vc_index(SetClass::boxes(2), 3);
  CHECK_FALSE(capped.exact);
  CHECK(capped.index == 4);
}

TEST_CASE("rho metric") {
  const Rect a = Rect::quadrant({0.5, 0.5});
  CHECK(rho(a, a) == 0.0);
  CHECK(rho(a, Rect::quadrant({0.5, 1.0})) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rho(std::nullopt, Rect::unit(2)) == 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_rect = [&] {
    const double x0 = u(rng), x1 = u(rng), y0 = u(rng), y1 = u(rng);
    return Rect({std::min(x0, x1), std::min(y0, y1)}, {std::max(x0, x1), std::max(y0, y1)});
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const Rect x = random_rect(), y = random_rect(), z = random_rect();
    CHECK(rho(x, z) <= rho(x, y) + rho(y, z) + 1e-12);
  }
}

TEST_CASE("covering brackets") {
  const SetClass q1 = SetClass::quadrants(1, 10);
  const CoveringBracket one = covering_number(q1, 1.0);
  CHECK(one.upper == 1);
  CHECK(one.lower <= one.upper);
  std::size_t last = std::numeric_limits<std::size_t>::max();
  for (double eps : {0.1, 0.2, 0.4, 0.8}) {
    const CoveringBracket b = covering_number(q1, eps);
    CHECK(b.lower <= b.upper);
    CHECK(b.upper <= last);
    last = b.upper;
  }
  CHECK_THROWS_AS(covering_number(SetClass::quadrants(1, 2), 0.05), InputError);
}

TEST_CASE("entropy integral of the one-dimensional quadrants") {
  std::vector<double> eps;
  for (int k = 0; k < 8; ++k) eps.push_back(0.05 * std::pow(6.0, k / 7.0));
  const CoveringReport rep = entropy_integral(SetClass::quadrants(1, 14), eps, 4.0, 2);
  CHECK(rep.fitted_exponent > 1.8);
  CHECK(rep.fitted_exponent < 2.2);
  CHECK(rep.dudley_finite);
  CHECK(rep.np_finite);
  CHECK(rep.below_envelope);
  for (std::size_t k = 1; k < rep.upper.size(); ++k) CHECK(rep.upper[k] <= rep.upper[k - 1]);
}
