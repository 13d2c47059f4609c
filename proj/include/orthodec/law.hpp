#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "orthodec/rng.hpp"

namespace orthodec {

/// Law of the iid innovations ε_j. Always centered: the projection calculus
/// relies on E[ε] = 0.
class InnovationLaw {
 public:
  enum class Kind { rademacher, gaussian, custom };

  static InnovationLaw rademacher();
  static InnovationLaw gaussian(double variance = 1.0);
  /// Finite discrete law on `points` with weights `probs`. Moments of order
  /// above `max_finite_moment` are declared non-existent (models laws with
  /// limited integrability).
  static InnovationLaw custom(std::vector<double> points, std::vector<double> probs,
                              double max_finite_moment = std::numeric_limits<double>::infinity());

  Kind kind() const { return kind_; }
  double variance() const { return variance_; }
  double stddev() const;
  /// E|ε_0|^p, or nullopt when the law lacks that moment.
  std::optional<double> abs_moment(double p) const;
  /// Largest x with |ε| <= x almost surely; infinity for unbounded laws.
  double sup_norm() const;
  std::string sampler_id() const;

  /// Maps 128 random bits to one draw.
  double draw(const Philox4x32::Counter& bits) const;

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& probs() const { return probs_; }
  double max_finite_moment() const { return max_moment_; }

 private:
  InnovationLaw() = default;

  Kind kind_ = Kind::rademacher;
  double variance_ = 1.0;
  std::vector<double> points_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
  double max_moment_ = std::numeric_limits<double>::infinity();
};

/// The infinite iid field (ε_j)_{j ∈ Z^d} of one replica: a pure function of
/// (law, seed, replica, index).
class InnovationField {
 public:
  InnovationField(InnovationLaw law, std::uint64_t seed, std::uint64_t replica = 0)
      : law_(std::move(law)), seed_(seed), replica_(replica) {}

  double at(const MultiIndex& j) const {
    return law_.draw(random_bits(seed_, replica_, static_cast<std::uint32_t>(Stream::innovation), j));
  }

  const InnovationLaw& law() const { return law_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t replica() const { return replica_; }

 private:
  InnovationLaw law_;
  std::uint64_t seed_;
  std::uint64_t replica_;
};

}  // namespace orthodec
