#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orthodec/lattice.hpp"

namespace orthodec {

using Point = std::vector<double>;

/// Q_d = {[0,t]}, Q'_d = {[s,t] : s ⪯ t}, or an explicit finite list (an
/// empty optional stands for ∅). `level` fixes the dyadic parameter grid
/// 2^-level used by covering computations.
struct SetClass {
  enum class Kind { quadrants, boxes, explicit_list };
  Kind kind = Kind::quadrants;
  std::size_t d = 1;
  std::vector<std::optional<Rect>> members;
  int level = 8;

  static SetClass quadrants(std::size_t d, int level = 8);
  static SetClass boxes(std::size_t d, int level = 8);
  static SetClass explicit_list(std::size_t d, std::vector<std::optional<Rect>> members);

  std::string name() const;
};

/// SetClass by name: "Q1", "Q2", "Q'1", "Qp2", ...
SetClass set_class_from_string(const std::string& name, int level = 8);

/// #{C ∩ {x_1..x_n} : C ∈ class}, exact (at most 63 points).
std::size_t picked_count(const SetClass& c, const std::vector<Point>& points);

struct VcResult {
  std::size_t index = 0;
  bool exact = false;  // false: `index` is only a lower bound
  std::vector<Point> witness;  // a shattered set of size index - 1
  std::size_t configurations = 0;
};

/// Smallest n such that no n-point set is shattered. For quadrants and boxes
/// only the per-axis order pattern of the points matters, so enumerating
/// patterns on the grid {1..n}/(n+1) is exhaustive. Explicit classes are
/// searched over the cells cut out by the member boundaries.
VcResult vc_index(const SetClass& c, std::size_t max_n = 8, std::size_t budget = 50'000'000);

/// sqrt(λ(A Δ B)).
double rho(const Rect& a, const Rect& b);
/// ρ for possibly-empty members.
double rho(const std::optional<Rect>& a, const std::optional<Rect>& b);

struct CoveringBracket {
  double epsilon = 0.0;
  std::size_t upper = 0;  // greedy ε-net size
  std::size_t lower = 0;  // 2ε-packing size
};

/// Largest ρ-distance from any class member to the parameter grid.
double discretization_error(const SetClass& c);

/// Bracket on N(class, ρ, ε); rejects ε with discretization error >= ε/4.
CoveringBracket covering_number(const SetClass& c, double eps);

struct CoveringReport {
  std::string class_name;
  std::size_t d = 1;
  int level = 0;
  double delta = 0.0;
  std::vector<double> epsilons;
  std::vector<std::size_t> upper;  // nonincreasing in ε
  std::vector<std::size_t> lower;
  std::vector<double> entropy;     // log upper
  double fitted_exponent = 0.0;    // N(ε) ≈ C ε^{-a}
  double fitted_log_constant = 0.0;
  double dudley_integral = 0.0;    // ∫_0^1 sqrt(H)
  bool dudley_finite = false;
  double p = 2.0;
  double np_integral = 0.0;        // ∫_0^1 N^{1/p}
  bool np_finite = false;
  std::size_t vc = 0;
  double vw_constant = 0.0;        // smallest K with N <= envelope on the grid
  double vw_exponent = 0.0;        // 2(V-1)
  std::vector<double> vw_envelope; // K V (4e)^V ε^{-2(V-1)}
  bool below_envelope = false;
};

/// Covering brackets on `epsilons` (ascending) plus entropy integrals. The
/// region below the smallest ε uses the fitted power law.
CoveringReport entropy_integral(const SetClass& c, const std::vector<double>& epsilons, double p,
                                std::size_t vc);

}  // namespace orthodec
