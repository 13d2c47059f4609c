#pragma once

#include <cstdint>
#include <random>

#include "orthodec/chaos.hpp"

namespace testing {

// Sparse element with support in {0..extent}^d and coefficients uniform in [-1,1].
inline orthodec::ChaosElement random_element(std::mt19937_64& rng, std::size_t d, std::int64_t extent = 4,
                                             std::size_t max_terms = 6) {
  std::uniform_int_distribution<std::int64_t> coord(0, extent);
  std::uniform_int_distribution<std::size_t> count(1, max_terms);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  orthodec::ChaosElement f(d);
  const std::size_t terms = count(rng);
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<std::int64_t> j(d);
    for (auto& x : j) x = coord(rng);
    f.add(orthodec::MultiIndex(j), coeff(rng));
  }
  return f;
}

// Same shape with dyadic coefficients k/8, so sums stay exact in binary.
inline orthodec::ChaosElement random_dyadic_element(std::mt19937_64& rng, std::size_t d, std::int64_t extent = 4,
                                                    std::size_t max_terms = 6) {
  std::uniform_int_distribution<std::int64_t> coord(0, extent);
  std::uniform_int_distribution<std::size_t> count(1, max_terms);
  std::uniform_int_distribution<int> numer(-8, 8);
  orthodec::ChaosElement f(d);
  const std::size_t terms = count(rng);
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<std::int64_t> j(d);
    for (auto& x : j) x = coord(rng);
    f.add(orthodec::MultiIndex(j), numer(rng) / 8.0);
  }
  return f;
}

inline double max_abs_diff(const orthodec::ChaosElement& a, const orthodec::ChaosElement& b) {
  const orthodec::ChaosElement diff = a - b;
  double worst = 0.0;
  for (const auto& [j, c] : diff.coeffs()) worst = std::max(worst, std::abs(c));
  return worst;
}

}  // namespace testing
