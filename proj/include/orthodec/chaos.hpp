#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "orthodec/law.hpp"
#include "orthodec/lattice.hpp"

namespace orthodec {

/// Element of the first chaos F = Σ_j c_j ε_{-j}: a finite sparse map from
/// lattice indices j to real coefficients. Exact zeros are never stored.
///
/// With M = σ(ε_i : i ⪯ 0), F is M-measurable iff every stored j satisfies
/// j ⪰ 0. More generally T^b M = σ(ε_{-l} : l ⪰ b).
class ChaosElement {
 public:
  using Map = std::map<MultiIndex, double>;

  ChaosElement() = default;
  explicit ChaosElement(std::size_t d);
  ChaosElement(std::size_t d, std::initializer_list<std::pair<MultiIndex, double>> terms);

  /// c·ε_{-j}.
  static ChaosElement innovation(const MultiIndex& j, double c = 1.0);

  std::size_t dim() const { return dim_; }
  const Map& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  double coeff(const MultiIndex& j) const;

  /// Accumulates c into the coefficient at j; drops the entry on exact zero.
  void add(const MultiIndex& j, double c);
  /// Overwrites the coefficient at j (c == 0 erases).
  void set(const MultiIndex& j, double c);

  /// True iff every stored index is ⪰ base, i.e. F is T^base M-measurable.
  bool is_measurable(const MultiIndex& base) const;
  std::vector<MultiIndex> offending_indices(const MultiIndex& base) const;

  double coeff_sum() const;
  double coeff_sum_squares() const;
  double max_abs_coeff() const;
  /// Largest coordinate along `axis` (1..d) over the support; requires non-empty.
  std::int64_t max_coord(std::size_t axis) const;
  std::int64_t min_coord(std::size_t axis) const;

  ChaosElement& operator+=(const ChaosElement& other);
  ChaosElement& operator-=(const ChaosElement& other);
  ChaosElement& operator*=(double a);
  friend ChaosElement operator+(ChaosElement a, const ChaosElement& b) { return a += b; }
  friend ChaosElement operator-(ChaosElement a, const ChaosElement& b) { return a -= b; }
  friend ChaosElement operator*(double a, ChaosElement f) { return f *= a; }

  friend bool operator==(const ChaosElement&, const ChaosElement&) = default;

 private:
  void require_dim(const MultiIndex& j) const;

  std::size_t dim_ = 0;
  Map coeffs_;
};

/// Conditioning σ-algebra: a shifted past T^shift M or a half-space algebra
/// F_{level,axis} = σ(ε_{-l} : l_axis >= level).
class SigmaAlgebraSpec {
 public:
  enum class Kind { shifted_past, half_space };

  static SigmaAlgebraSpec shifted_past(MultiIndex shift);
  static SigmaAlgebraSpec past(std::size_t d) { return shifted_past(MultiIndex::zero(d)); }
  static SigmaAlgebraSpec half_space(std::size_t d, std::size_t axis, std::int64_t level);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const MultiIndex& shift() const { return shift_; }
  std::size_t axis() const { return axis_; }
  std::int64_t level() const { return level_; }

  /// Whether ε_{-l} is measurable with respect to this algebra.
  bool keeps(const MultiIndex& l) const;

 private:
  Kind kind_ = Kind::shifted_past;
  std::size_t dim_ = 0;
  MultiIndex shift_;
  std::size_t axis_ = 1;
  std::int64_t level_ = 0;
};

/// U^j F: output coefficient at l equals input coefficient at l + j.
ChaosElement shift(const ChaosElement& f, const MultiIndex& j);
/// E[F | G]: drops every innovation that is not G-measurable.
ChaosElement project(const ChaosElement& f, const SigmaAlgebraSpec& g);
/// a·F + b·G.
ChaosElement combine(double a, const ChaosElement& f, double b, const ChaosElement& g);

/// ‖F‖_2 = σ·sqrt(Σ c_j²), exact by orthogonality.
double l2_norm(const ChaosElement& f, const InnovationLaw& law);

struct LpEstimate {
  double p = 2.0;
  double estimate = 0.0;     // ‖F‖_p
  double std_error = 0.0;    // delta-method standard error of the estimate
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool exact = false;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  bool has_bracket = false;
  double rosenthal_quadratic = 0.0;  // (Σ c_j² E ε²)^{p/2}
  double rosenthal_moment = 0.0;     // Σ |c_j|^p E|ε|^p
};

/// Monte Carlo estimate of ‖F‖_p with a 95% normal-approximation interval and
/// the two raw Rosenthal quantities. p = 2 delegates to l2_norm.
LpEstimate lp_norm_estimate(const ChaosElement& f, const InnovationLaw& law, double p,
                            std::size_t replicas, std::uint64_t seed, bool with_bracket = true);

/// Realizes (U^k F)(ω) = Σ_j c_j ε_{k-j} for one draw of the innovation field.
double evaluate(const ChaosElement& f, const InnovationField& field, const MultiIndex& k);

}  // namespace orthodec
