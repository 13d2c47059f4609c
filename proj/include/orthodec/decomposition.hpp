#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "orthodec/chaos.hpp"

namespace orthodec {

/// Subsets J of the axes {1..d} are encoded as bitmasks: bit (s-1) set iff s ∈ J.
using AxisMask = std::uint32_t;

inline AxisMask axis_bit(std::size_t axis) { return AxisMask{1} << (axis - 1); }
inline AxisMask full_mask(std::size_t d) { return (AxisMask{1} << d) - 1; }
inline bool mask_has(AxisMask mask, std::size_t axis) { return (mask & axis_bit(axis)) != 0; }

/// f = m + Σ_{∅⊊J⊊<d>} Π_{s∈J}(I-U_s) m_J + Π_{s=1}^d (I-U_s) g.
struct Decomposition {
  std::size_t dim = 0;
  ChaosElement m;
  std::map<AxisMask, ChaosElement> boundary_terms;  // proper non-empty J only
  ChaosElement corner;                              // g

  explicit Decomposition(std::size_t d = 1);

  /// m_J for any J ⊆ <d>: J = ∅ gives m, J = <d> gives g, missing terms are 0.
  ChaosElement term(AxisMask mask) const;
  void set_term(AxisMask mask, ChaosElement value);
};

struct VolnyStep {
  ChaosElement martingale;  // M_s
  ChaosElement transfer;    // G_s
};

/// One-dimensional martingale-coboundary step along `axis` relative to the
/// past T^base M:
///   M_s = Σ_{k>=0} E[U_s^k F | T^base M] - E[U_s^k F | T^{base+e_s} M],
///   G_s = Σ_{k>=0} E[U_s^k F | T^{base+e_s} M],
/// so that F = M_s + (I - U_s) G_s. The series stop at the support extent.
VolnyStep volny_step(const ChaosElement& f, std::size_t axis, const MultiIndex& base);

/// Π_{s∈J} (I - U_s) h, expanded through signed shifts over subsets of J.
ChaosElement apply_difference_operator(const ChaosElement& h, AxisMask mask);

/// Splits an M-measurable element into its martingale and coboundary parts.
/// d = 1 is the Volný step, d = 2 and d = 3 use the explicit chains, d >= 4
/// the generic recursion.
Decomposition decompose(const ChaosElement& f);
/// The generic recursion for any d (decompose along the last axis, correct by
/// inclusion-exclusion, recurse on each transfer function).
Decomposition decompose_generic(const ChaosElement& f);
Decomposition decompose_explicit_d2(const ChaosElement& f);
Decomposition decompose_explicit_d3(const ChaosElement& f);

ChaosElement reconstruct(const Decomposition& dec);

struct OmdResidual {
  AxisMask mask = 0;   // which term: 0 = m, full = corner (never checked)
  std::size_t axis = 1;
  double residual = 0.0;  // ‖E[term | T^{e_axis} M]‖_2 with unit variance
};

struct OmdReport {
  std::vector<OmdResidual> residuals;
  bool pass = true;  // every residual exactly zero
};

/// m must be orthogonal to T_s M for every s; m_J for every s ∉ J.
OmdReport omd_verify(const Decomposition& dec);

// ---------------------------------------------------------------------------
// Projective series conditions
// ---------------------------------------------------------------------------

struct SeriesTerm {
  std::int64_t k = 0;
  double weight = 0.0;  // k^{d-1}, with 0^0 = 1
  double norm = 0.0;    // ‖E[f | algebra(k)]‖_p
  double std_error = 0.0;
};

struct SeriesReport {
  std::size_t axis = 1;
  double p = 2.0;
  SigmaAlgebraSpec::Kind algebra = SigmaAlgebraSpec::Kind::shifted_past;
  std::vector<SeriesTerm> terms;
  std::vector<double> partial_sums;
  std::int64_t truncation = 0;
  bool converged = false;
  bool inconclusive = false;
  bool infinite = false;
  double total = 0.0;
  double tail_tolerance = 1e-12;
  bool exact = true;
};

struct SeriesOptions {
  std::int64_t cap = 10000;
  double tail_tolerance = 1e-12;
  std::size_t replicas = 20000;  // Monte Carlo replicas when p != 2
  std::uint64_t seed = 1;
};

/// Σ_k k^{d-1} ‖E[f | algebra(k)]‖_p over k = 0, 1, ...; the k = 0 term has
/// weight 0^{d-1}, i.e. it only contributes in d = 1. algebra(k) is T_s^k M
/// (shifted_past) or F_{k,s} (half_space).
SeriesReport series_condition(const ChaosElement& f, std::size_t axis, double p,
                              const InnovationLaw& law, SigmaAlgebraSpec::Kind algebra,
                              const SeriesOptions& options = {});

/// Coefficients given by a closed-form generator on {j ⪰ 0}; the box
/// {0..extent}^d is materialized. Used for infinite-support inputs.
ChaosElement materialize(std::size_t d, std::int64_t extent,
                         const std::function<double(const MultiIndex&)>& generator);

/// Series condition on a truncation of an infinite-support generator. The
/// report is converged only if the term at the truncation index is below the
/// tail tolerance; otherwise it is inconclusive.
SeriesReport series_condition_generated(std::size_t d,
                                        const std::function<double(const MultiIndex&)>& generator,
                                        std::size_t axis, double p, const InnovationLaw& law,
                                        SigmaAlgebraSpec::Kind algebra,
                                        const SeriesOptions& options);

struct LinearConditionReport {
  SeriesReport l2;         // Σ k^{d-1} sqrt(Σ_{i∈Λ_{k,s}} a_i²)
  bool has_rosenthal = false;
  SeriesReport rosenthal;  // Σ k^{d-1} [(Σ a_i²)^{1/2} + (Σ |a_i|^p)^{1/p}], p > 2
  bool half_space_matches = true;  // term-wise: half_space series at p = 2 equals σ·l2 term
  double max_match_error = 0.0;
};

LinearConditionReport linear_condition(const ChaosElement& a, std::size_t axis, double p,
                                       const InnovationLaw& law, const SeriesOptions& options = {});

}  // namespace orthodec
