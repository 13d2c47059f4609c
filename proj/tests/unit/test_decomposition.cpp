#include <cmath>
#include <random>

#include "doctest.h"
#include "orthodec/decomposition.hpp"
#include "orthodec/error.hpp"
#include "support.hpp"

using namespace orthodec;

namespace {

const InnovationLaw kUnit = InnovationLaw::rademacher();

ChaosElement partial_sum_1d(const ChaosElement& f, std::int64_t n) {
  ChaosElement s(1);
  for (std::int64_t k = 0; k < n; ++k) s += shift(f, {k});
  return s;
}

}  // namespace

TEST_CASE("Volny step on a hand-computed example") {
  const ChaosElement f(1, {{{0}, 1.0}, {{1}, 2.0}, {{2}, 3.0}});
  const auto [m, g] = volny_step(f, 1, {0});
  CHECK(m == ChaosElement(1, {{{0}, 6.0}}));
  CHECK(g == ChaosElement(1, {{{1}, 5.0}, {{2}, 3.0}}));
  CHECK(m + g - shift(g, {1}) == f);
}

TEST_CASE("Volny step fixed points") {
  for (std::size_t axis = 1; axis <= 2; ++axis) {
    const auto [m, g] = volny_step(ChaosElement::innovation({0, 0}), axis, MultiIndex::zero(2));
    CHECK(m == ChaosElement::innovation({0, 0}));
    CHECK(g.empty());
    // a pure coboundary (I - U_s) eps_{-e_s}
    const MultiIndex e = MultiIndex::unit(2, axis);
    const ChaosElement cob = apply_difference_operator(ChaosElement::innovation(e), axis_bit(axis));
    const auto [m2, g2] = volny_step(cob, axis, MultiIndex::zero(2));
    CHECK(m2.empty());
    CHECK(g2 == ChaosElement::innovation(e));
  }
}

TEST_CASE("decompose small cases") {
  const Decomposition d1 = decompose(ChaosElement(1, {{{0}, 1.0}, {{1}, 1.0}}));
  CHECK(d1.m == ChaosElement(1, {{{0}, 2.0}}));
  CHECK(d1.corner == ChaosElement(1, {{{1}, 1.0}}));

  const ChaosElement iid = ChaosElement::innovation({0, 0});
  const Decomposition d2 = decompose(iid);
  CHECK(d2.m == iid);
  CHECK(d2.boundary_terms.empty());
  CHECK(d2.corner.empty());

  const ChaosElement three(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}});
  const Decomposition d3 = decompose(three);
  CHECK(d3.m == ChaosElement(2, {{{0, 0}, 3.0}}));
  CHECK(reconstruct(d3) == three);
  CHECK(omd_verify(d3).pass);
}

TEST_CASE("decompose rejects inputs outside the past") {
  CHECK_THROWS_AS(decompose(ChaosElement(2, {{{0, -1}, 1.0}})), InputError);
  CHECK_THROWS_AS(decompose(ChaosElement(1, {{{-3}, 1.0}})), InputError);
}

TEST_CASE("reconstruct and the difference operator") {
  Decomposition only_m(2);
  only_m.m = ChaosElement(2, {{{0, 0}, 0.5}});
  CHECK(reconstruct(only_m) == only_m.m);
  const ChaosElement h = ChaosElement::innovation({1, 0});
  CHECK(apply_difference_operator(h, axis_bit(1)) == ChaosElement(2, {{{1, 0}, 1.0}, {{0, 0}, -1.0}}));
}

TEST_CASE("omd_verify detects broken decompositions") {
  Decomposition bad(2);
  bad.m = ChaosElement::innovation({1, 0});
  const OmdReport r = omd_verify(bad);
  CHECK_FALSE(r.pass);
  bool axis1_positive = false;
  for (const auto& res : r.residuals)
    if (res.mask == 0 && res.axis == 1) axis1_positive = res.residual > 0.0;
  CHECK(axis1_positive);

  Decomposition ok(2);
  ok.set_term(axis_bit(1), ChaosElement::innovation({1, 0}));
  const OmdReport r2 = omd_verify(ok);
  CHECK(r2.pass);
  for (const auto& res : r2.residuals)
    if (res.mask == axis_bit(1)) CHECK(res.axis == 2);
}

TEST_CASE("round trip, OMD exactness and the collapse law on random inputs") {
  std::mt19937_64 rng(99);
  for (std::size_t d = 1; d <= 4; ++d) {
    for (int trial = 0; trial < 60; ++trial) {
      const ChaosElement f = testing::random_element(rng, d, d == 4 ? 2 : 4);
      const Decomposition dec = decompose(f);
      CHECK(testing::max_abs_diff(reconstruct(dec), f) < 1e-10);
      CHECK(omd_verify(dec).pass);
      CHECK(dec.m.size() <= 1);
      CHECK(std::abs(dec.m.coeff(MultiIndex::zero(d)) - f.coeff_sum()) < 1e-12);
      const ChaosElement dyadic = testing::random_dyadic_element(rng, d, d == 4 ? 2 : 4);
      CHECK(reconstruct(decompose(dyadic)) == dyadic);
    }
  }
}

TEST_CASE("generic recursion agrees with the explicit chains") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ChaosElement f2 = testing::random_element(rng, 2);
    CHECK(testing::max_abs_diff(decompose_generic(f2).m, decompose_explicit_d2(f2).m) < 1e-12);
    CHECK(testing::max_abs_diff(reconstruct(decompose_generic(f2)), f2) < 1e-10);
    const ChaosElement f3 = testing::random_element(rng, 3);
    CHECK(testing::max_abs_diff(decompose_generic(f3).m, decompose_explicit_d3(f3).m) < 1e-12);
    // the recursion also reproduces every boundary term and the corner
    for (const ChaosElement& f : {testing::random_dyadic_element(rng, 2), testing::random_dyadic_element(rng, 3)}) {
      const Decomposition a = decompose_generic(f);
      const Decomposition b = f.dim() == 2 ? decompose_explicit_d2(f) : decompose_explicit_d3(f);
      CHECK(a.boundary_terms == b.boundary_terms);
      CHECK(a.corner == b.corner);
    }
    CHECK(omd_verify(decompose_generic(f3)).pass);
  }
}

TEST_CASE("one-dimensional partial sums telescope") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const ChaosElement f = testing::random_dyadic_element(rng, 1, 6);
    const Decomposition dec = decompose(f);
    const auto [m, g] = volny_step(f, 1, {0});
    CHECK(dec.m == m);
    CHECK(dec.corner == g);
    CHECK(m + g - shift(g, {1}) == f);
    for (std::int64_t n : {1, 2, 5})
      CHECK(partial_sum_1d(f, n) == partial_sum_1d(m, n) + g - shift(g, {n}));
  }
}

TEST_CASE("series conditions") {
  const ChaosElement diag(2, {{{0, 0}, 1.0}, {{1, 1}, 1.0}});
  const SeriesReport hs = series_condition(diag, 1, 2.0, kUnit, SigmaAlgebraSpec::Kind::half_space);
  CHECK(hs.converged);
  CHECK(hs.total == 1.0);
  REQUIRE_FALSE(hs.terms.empty());
  CHECK(hs.terms.front().k == 1);
  CHECK(hs.terms.front().norm == 1.0);

  CHECK(series_condition(ChaosElement::innovation({0, 0}), 1, 2.0, kUnit, SigmaAlgebraSpec::Kind::shifted_past)
            .total == 0.0);
  // in one dimension the series starts at lag 0 with weight 0^0 = 1
  CHECK(series_condition(ChaosElement::innovation({0}), 1, 2.0, kUnit, SigmaAlgebraSpec::Kind::shifted_past)
            .total == 1.0);

  SeriesOptions opt;
  opt.cap = 60;
  const auto geometric = [](const MultiIndex& j) { return std::ldexp(1.0, -static_cast<int>(j[0])); };
  const SeriesReport g = series_condition_generated(1, geometric, 1, 2.0, kUnit, SigmaAlgebraSpec::Kind::shifted_past, opt);
  CHECK(g.converged);
  CHECK(std::abs(g.total - 4.0 / std::sqrt(3.0)) < 1e-9);
  const LinearConditionReport lin = linear_condition(materialize(1, 60, geometric), 1, 2.0, kUnit, opt);
  CHECK(std::abs(lin.l2.total - 4.0 / std::sqrt(3.0)) < 1e-9);
  CHECK(lin.half_space_matches);
  CHECK_THROWS_AS(linear_condition(diag, 1, 1.5, kUnit), InputError);
}

TEST_CASE("linear condition equals the half-space series over sigma") {
  std::mt19937_64 rng(3);
  const InnovationLaw wide = InnovationLaw::gaussian(2.25);
  for (int trial = 0; trial < 30; ++trial) {
    const ChaosElement f = testing::random_element(rng, 2, 5);
    const LinearConditionReport lin = linear_condition(f, 2, 4.0, wide);
    CHECK(lin.l2.converged);
    CHECK(lin.has_rosenthal);
    const SeriesReport hs = series_condition(f, 2, 2.0, wide, SigmaAlgebraSpec::Kind::half_space);
    CHECK(lin.l2.total == doctest::Approx(hs.total / 1.5).epsilon(1e-12));
  }
}

TEST_CASE("shifted-past terms are dominated by half-space terms") {
  std::mt19937_64 rng(8);
  for (std::size_t d = 1; d <= 3; ++d) {
    for (int trial = 0; trial < 30; ++trial) {
      const ChaosElement f = testing::random_element(rng, d, 5, 8);
      for (std::size_t axis = 1; axis <= d; ++axis) {
        const auto sp = series_condition(f, axis, 2.0, kUnit, SigmaAlgebraSpec::Kind::shifted_past);
        const auto hs = series_condition(f, axis, 2.0, kUnit, SigmaAlgebraSpec::Kind::half_space);
        REQUIRE(sp.terms.size() == hs.terms.size());
        for (std::size_t k = 0; k < sp.terms.size(); ++k) CHECK(sp.terms[k].norm <= hs.terms[k].norm);
      }
    }
  }
}
