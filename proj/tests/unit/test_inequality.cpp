#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "orthodec/error.hpp"
#include "orthodec/inequality.hpp"

using namespace orthodec;

namespace {

std::vector<double> normal_sample(std::size_t count, std::uint64_t seed, double sd = 1.0, double shift = 0.0) {
  const InnovationField field(InnovationLaw::gaussian(), seed);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = shift + sd * field.at({static_cast<std::int64_t>(k)});
  return out;
}

}  // namespace

TEST_CASE("Young functions") {
  const auto psi1 = YoungFunctionSpec::psi(1.0);
  CHECK(psi1.h == 0.0);
  CHECK(young_eval(psi1, 0.0) == 0.0);
  CHECK(young_eval(psi1, 2.0) == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-15));
  const auto half = YoungFunctionSpec::psi(0.5);
  CHECK(half.h == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(young_eval(half, 3.0) == doctest::Approx(std::exp(2.0) - std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("beta exponent") {
  const BetaExponent b = beta_exponent(2.0 / 3.0, 2);
  CHECK_FALSE(b.unbounded);
  CHECK(b.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(beta_exponent(1.0, 2).unbounded);
  CHECK_THROWS_AS(beta_exponent(1.5, 2), InputError);
}

TEST_CASE("Luxemburg norms of empirical measures") {
  CHECK(luxemburg_norm(std::vector<double>(10, 0.0), YoungFunctionSpec::psi(1.0)) == 0.0);
  CHECK(luxemburg_norm(std::vector<double>(7, 1.5), YoungFunctionSpec::psi(1.0)) ==
        doctest::Approx(1.5 / std::log(2.0)).epsilon(1e-10));
  const auto sample = normal_sample(500, 4);
  std::vector<double> scaled(sample);
  for (double& x : scaled) x *= 3.5;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto psi = YoungFunctionSpec::psi(alpha);
    CHECK(luxemburg_norm(scaled, psi) == doctest::Approx(3.5 * luxemburg_norm(sample, psi)).epsilon(1e-9));
  }
  for (double p : {1.0, 2.0, 4.0}) {
    double mean = 0.0;
    for (double x : sample) mean += std::pow(std::abs(x), p);
    mean /= static_cast<double>(sample.size());
    CHECK(std::abs(luxemburg_norm(sample, YoungFunctionSpec::power(p)) - std::pow(mean, 1.0 / p)) < 1e-8);
  }
}

TEST_CASE("Rademacher sum norms and exact moment ratios") {
  CHECK(rademacher_sum_norm(2, 4.0) == doctest::Approx(std::pow(8.0, 0.25)).epsilon(1e-14));
  CHECK(rademacher_sum_norm(9, 2.0) == doctest::Approx(3.0).epsilon(1e-14));
  for (std::int64_t n : {1, 7, 64}) CHECK(moment_ratio_product_exact({n + 1, n + 1}, 2.0).ratio == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(moment_ratio_product_exact({2}, 4.0).ratio == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
  // the ratio grows with p
  double last = 0.0;
  for (double p : {2.0, 4.0, 8.0, 16.0}) {
    const double r = moment_ratio_product_exact({65, 65}, p).ratio;
    CHECK(r > last);
    last = r;
  }
}

TEST_CASE("exact moment ratio agrees with Monte Carlo") {
  ExperimentSpec spec;
  spec.field = FieldKind::product_omd;
  spec.d = 2;
  spec.n = 16;
  spec.replicas = 20000;
  spec.seed = 3;
  const auto exact = moment_ratio(spec, 4.0, MomentMethod::exact_factorized);
  const auto mc = moment_ratio(spec, 4.0, MomentMethod::monte_carlo);
  CHECK(exact.std_error == 0.0);
  CHECK(std::abs(mc.ratio - exact.ratio) < 5.0 * mc.std_error);
  spec.field = FieldKind::iid;
  CHECK_THROWS_AS(moment_ratio(spec, 4.0, MomentMethod::exact_factorized), InputError);
}

TEST_CASE("KS calibration against the target normal") {
  int passes = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    passes += gaussian_limit_test(normal_sample(10000, seed), 1.0, 1.36 / 100.0).pass ? 1 : 0;
  CHECK(passes >= 90);
  const KSReport shifted = gaussian_limit_test(normal_sample(10000, 1, 1.0, 1.0), 1.0);
  CHECK_FALSE(shifted.pass);
  CHECK(std::abs(shifted.statistic - 0.3829) < 0.02);
  const KSReport constant = gaussian_limit_test(std::vector<double>(50, 0.2), 1.0);
  CHECK(constant.degenerate);
  CHECK_FALSE(constant.pass);
}

TEST_CASE("KS statistic invariances") {
  auto sample = normal_sample(3000, 8, 1.3);
  const double base = gaussian_limit_test(sample, 1.7).statistic;
  std::mt19937_64 rng(2);
  std::shuffle(sample.begin(), sample.end(), rng);
  CHECK(gaussian_limit_test(sample, 1.7).statistic == base);
  for (double& x : sample) x *= 4.0;
  CHECK(std::abs(gaussian_limit_test(sample, 1.7 * 16.0).statistic - base) < 1e-12);
}

TEST_CASE("covariance structure of iid rectangle sums") {
  ExperimentSpec spec;
  spec.field = FieldKind::iid;
  spec.d = 2;
  spec.law = InnovationLaw::gaussian();
  spec.n = 16;
  spec.replicas = 4000;
  spec.statistic = StatisticKind::rectangles;
  spec.rectangles = {Rect::unit(2), Rect::quadrant({0.5, 0.5}), Rect({0.5, 0.5}, {1.0, 1.0})};
  const EmpiricalSample s = run_experiment(spec, 2);
  const CovarianceReport rep = covariance_structure_test(s, spec.rectangles, {{0, 0}, {0, 1}, {1, 2}}, 1.0);
  CHECK(rep.pass);
  REQUIRE(rep.checks.size() == 3);
  CHECK(rep.checks[1].target == 0.25);
  CHECK(rep.checks[2].disjoint);
  spec.replicas = 10;
  CHECK_THROWS_AS(covariance_structure_test(run_experiment(spec), spec.rectangles, {{0, 1}}, 1.0), InputError);
}

TEST_CASE("tail bound report") {
  std::vector<double> abs_sample;
  for (double x : normal_sample(5000, 6)) abs_sample.push_back(std::abs(x));
  std::vector<double> grid = {0.0};
  for (int k = 1; k <= 10; ++k) grid.push_back(0.4 * k);
  const TailReport rep = tail_bound_check(abs_sample, 1.0, 2, 1.0, grid, true);
  CHECK(rep.bound_decreasing);
  CHECK(std::isfinite(rep.kappa));
  REQUIRE(rep.rows.size() == grid.size());
  CHECK(rep.rows.front().bound >= 1.0);
  for (const auto& row : rep.rows) CHECK(row.frequency <= row.bound + 1e-12);
}

TEST_CASE("Hoelder thresholds") {
  CHECK(holder_threshold(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(holder_threshold(2) - 4.0 / std::log2(8.0 / 5.0)) < 1e-12);
  CHECK(std::abs(holder_threshold(2) - 5.8995) < 1e-3);
  for (std::size_t d = 1; d < 6; ++d) CHECK(holder_threshold(d + 1) > holder_threshold(d));
}

TEST_CASE("Hoelder diagnostics on a small linear field") {
  ExperimentSpec spec;
  spec.field = FieldKind::linear;
  spec.d = 2;
  spec.coeffs = ChaosElement(2, {{{0, 0}, 1.0}, {{1, 0}, 0.5}});
  spec.law = InnovationLaw::gaussian();
  spec.n = 16;
  spec.replicas = 400;
  const PathSample paths = sample_paths(spec, 2);
  const HolderReport rep = holder_check(paths, 8.0, 0.2, {0.5, 1.0, 2.0});
  CHECK(rep.admissible);
  CHECK(rep.gamma_limit == doctest::Approx(0.25));
  CHECK(rep.p_above_threshold);
  CHECK(rep.k_consistent);
  CHECK(rep.fitted_k > 0.0);
  for (const auto& row : rep.rows) CHECK(row.k_needed <= rep.fitted_k);
  CHECK_FALSE(holder_check(paths, 8.0, 0.3, {1.0}).admissible);
}
