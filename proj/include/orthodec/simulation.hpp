#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orthodec/chaos.hpp"
#include "orthodec/lattice.hpp"
#include "orthodec/law.hpp"

namespace orthodec {

/// The lattice box {lower, ..., lower + extents - 1} (componentwise).
struct Box {
  MultiIndex lower;
  std::vector<std::int64_t> extents;

  /// <n>^d = {1..n}^d.
  static Box grid(std::size_t d, std::int64_t n);
  std::size_t dim() const { return lower.dim(); }
  std::size_t size() const;
  MultiIndex upper() const;  // inclusive
  bool contains(const MultiIndex& i) const;
  bool covers(const Box& other) const;
  /// Row-major offset, last axis fastest.
  std::size_t offset(const MultiIndex& i) const;
  MultiIndex index_at(std::size_t offset) const;
};

struct Provenance {
  std::string sampler_id;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
};

/// Realized field values on a box.
struct GridSample {
  Box box;
  std::vector<double> values;
  Provenance provenance;

  double at(const MultiIndex& i) const { return values[box.offset(i)]; }
};

/// iid draws; the value at an absolute index depends only on (law, seed,
/// replica, index), never on the box.
GridSample sample_innovations(const InnovationLaw& law, const Box& box, std::uint64_t seed,
                              std::uint64_t replica = 0);

/// X_k = Σ_j a_j ε_{k-j} on the largest box the innovations support.
GridSample sample_linear_field(const ChaosElement& a, const GridSample& innovations);
/// Same on `target`; throws if the innovations lack the required margin.
GridSample sample_linear_field(const ChaosElement& a, const GridSample& innovations, const Box& target);
/// Linear field on <n>^d, drawing exactly the innovations it needs.
GridSample linear_field_on_grid(const ChaosElement& a, const InnovationLaw& law, std::int64_t n,
                                std::uint64_t seed, std::uint64_t replica = 0);

/// Z_i = Π_s η^{(s)}_{i_s} on <n>^d with d independent Rademacher sequences.
GridSample sample_product_omd(std::uint64_t seed, std::int64_t n, std::size_t d,
                              std::uint64_t replica = 0);
/// The one-dimensional factor sequence η^{(axis)}_1..n of sample_product_omd.
std::vector<double> product_axis_sequence(std::uint64_t seed, std::int64_t n, std::size_t axis,
                                          std::uint64_t replica = 0);

/// S_n(A) = Σ_{i∈<n>^d} λ(nA ∩ R_i) X_i by direct summation.
double partial_sum(const GridSample& x, const Rect& a, std::int64_t n);

/// Prefix-sum evaluator for many rectangles on one realization: O(6^d) per
/// query after O(n^d) setup. Agrees with partial_sum up to rounding.
class PartialSumEvaluator {
 public:
  PartialSumEvaluator(const GridSample& x, std::int64_t n);
  double operator()(const Rect& a) const;

 private:
  double prefix(const std::vector<std::int64_t>& k) const;  // Σ_{1⪯i⪯k} X_i, k_s in 0..n
  /// Σ_{lo⪯i⪯hi} X_i.
  double block(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi) const;

  std::size_t d_;
  std::int64_t n_;
  std::vector<double> prefix_;  // (n+1)^d table
};

// ---------------------------------------------------------------------------
// Monte Carlo runner
// ---------------------------------------------------------------------------

enum class FieldKind { linear, product_omd, iid };
enum class StatisticKind { endpoint, fixed_points, rectangles, sup_modulus };

std::string to_string(FieldKind kind);
std::string to_string(StatisticKind kind);
FieldKind field_kind_from_string(const std::string& s);
StatisticKind statistic_kind_from_string(const std::string& s);

struct ExperimentSpec {
  FieldKind field = FieldKind::iid;
  std::size_t d = 1;
  ChaosElement coeffs;  // linear fields only
  InnovationLaw law = InnovationLaw::rademacher();
  std::int64_t n = 16;
  std::size_t replicas = 100;
  std::uint64_t seed = 1;
  StatisticKind statistic = StatisticKind::endpoint;
  std::vector<std::vector<double>> points;  // fixed_points: quadrant corners t
  std::vector<Rect> rectangles;             // rectangles
  int grid_level = 3;                       // sup_modulus: dyadic grid 2^-level
  double gamma = 0.0;                       // sup_modulus exponent
};

/// replicas x width statistics, row r holding replica r.
struct EmpiricalSample {
  std::size_t replicas = 0;
  std::size_t width = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string sampler_id;

  double at(std::size_t replica, std::size_t column) const { return values[replica * width + column]; }
  std::vector<double> column(std::size_t c) const;
};

/// Normalized partial sums n^{-d/2} S_n([0,t]) for t on a grid.
struct PathSample {
  std::int64_t n = 0;
  std::vector<std::vector<double>> points;
  EmpiricalSample sample;
};

void validate(const ExperimentSpec& spec);
/// The realization of replica r on <n>^d.
GridSample sample_field(const ExperimentSpec& spec, std::uint64_t replica);
/// The statistic row of replica r.
std::vector<double> evaluate_statistic(const ExperimentSpec& spec, const GridSample& x);
/// Bit-identical output for any worker count.
EmpiricalSample run_experiment(const ExperimentSpec& spec, std::size_t workers = 1);

/// All corners t ∈ {0, 2^-level, ..., 1}^d, in row-major order.
std::vector<std::vector<double>> dyadic_points(std::size_t d, int level);
/// run_experiment with statistic fixed_points on the dyadic grid of `level`.
PathSample sample_paths(ExperimentSpec spec, int level, std::size_t workers = 1);

}  // namespace orthodec
