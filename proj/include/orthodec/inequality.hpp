#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orthodec/simulation.hpp"

namespace orthodec {

/// Young function ψ_α(x) = exp((x + h_α)^α) - exp(h_α^α) with
/// h_α = ((1-α)/α)^{1/α} for 0 < α < 1 and h_α = 0 otherwise, or the power
/// function x^p.
struct YoungFunctionSpec {
  enum class Kind { psi, power };
  Kind kind = Kind::psi;
  double alpha = 1.0;  // ψ_α exponent, or p for the power function
  double h = 0.0;

  static YoungFunctionSpec psi(double alpha);
  static YoungFunctionSpec power(double p);
};

double young_eval(const YoungFunctionSpec& psi, double x);
double young_eval(double alpha, double x);

struct BetaExponent {
  double value = 0.0;
  bool unbounded = false;  // q = 2/d: only for uniformly bounded fields
};

/// β(q) = 2q / (2 - dq) for 0 < q <= 2/d.
BetaExponent beta_exponent(double q, std::size_t d);

/// inf{c > 0 : mean ψ(|Z_i|/c) <= 1}, by bisection in log space to relative
/// tolerance 1e-8.
double luxemburg_norm(const std::vector<double>& sample, const YoungFunctionSpec& psi);

// ---------------------------------------------------------------------------

enum class MomentMethod { exact_factorized, monte_carlo };
std::string to_string(MomentMethod m);

struct MomentRatioReport {
  std::size_t d = 0;
  double p = 2.0;
  std::vector<std::int64_t> terms;  // summands per axis
  double measured = 0.0;            // ‖Σ X_k‖_p
  double reference = 0.0;           // (Σ ‖X_k‖_p²)^{1/2}
  double ratio = 0.0;
  MomentMethod method = MomentMethod::exact_factorized;
  double std_error = 0.0;  // of the ratio; 0 when exact
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
};

/// ‖η_1 + ... + η_m‖_p for iid Rademacher η, exact via the binomial law
/// built by Pascal recursion.
double rademacher_sum_norm(std::int64_t m, double p);

/// Product field Z_i = Π_s η^{(s)}_{i_s}: ‖Σ Z‖_p = Π_s ‖Σ_i η^{(s)}_i‖_p.
MomentRatioReport moment_ratio_product_exact(const std::vector<std::int64_t>& terms, double p);

/// Ratio for the field of `spec` summed over <n>^d. Exact only for the
/// product field.
MomentRatioReport moment_ratio(const ExperimentSpec& spec, double p, MomentMethod method,
                               std::size_t workers = 1);

// ---------------------------------------------------------------------------

struct KSReport {
  std::size_t sample_size = 0;
  double target_variance = 1.0;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool degenerate = false;
};

/// Default threshold: twice the asymptotic 95% critical value 1.36/sqrt(N).
double default_ks_threshold(std::size_t n);

/// Kolmogorov-Smirnov distance between the sample and N(0, target_variance).
KSReport gaussian_limit_test(std::vector<double> sample, double target_variance,
                             std::optional<double> threshold = std::nullopt);

struct CovarianceCheck {
  std::size_t first = 0;   // columns of the sample
  std::size_t second = 0;
  double overlap = 0.0;    // λ(A ∩ B)
  double empirical = 0.0;
  double target = 0.0;
  double std_error = 0.0;
  bool disjoint = false;
  bool pass = false;
};

struct CovarianceReport {
  double target_variance = 1.0;
  double relative_tolerance = 0.1;
  double se_multiplier = 5.0;
  std::vector<CovarianceCheck> checks;
  bool pass = true;
};

/// Empirical Cov(Y(A), Y(B)) against target_variance·λ(A∩B); disjoint pairs
/// are judged against zero in standard errors. Column c of `sample` holds
/// Y(rects[c]).
CovarianceReport covariance_structure_test(const EmpiricalSample& sample, const std::vector<Rect>& rects,
                                           const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                           double target_variance, double relative_tolerance = 0.1,
                                           double se_multiplier = 5.0);

// ---------------------------------------------------------------------------

struct TailRow {
  double x = 0.0;
  double frequency = 0.0;
  double kappa_needed = 0.0;
  double bound = 0.0;  // at the fitted κ
};

struct TailReport {
  double q = 1.0;
  std::size_t d = 1;
  double h = 0.0;
  double reference = 1.0;  // R
  std::vector<TailRow> rows;
  double kappa = 0.0;  // smallest κ making the bound hold on the grid
  bool bound_decreasing = true;
};

/// Empirical P(|S| >= x) against (1 + e^{h^q}) exp(-(x/(κR) + h)^q).
TailReport tail_bound_check(const std::vector<double>& abs_sample, double q, std::size_t d,
                            double reference, const std::vector<double>& x_grid, bool bounded_field);

/// R = sqrt(terms)·‖X_0‖ for a stationary field.
double tail_reference(double terms, double single_norm);

// ---------------------------------------------------------------------------

/// 4 / log2(4d / (4d - 3)).
double holder_threshold(std::size_t d);

struct HolderRow {
  std::size_t first = 0;  // point indices
  std::size_t second = 0;
  double distance = 0.0;
  double epsilon = 0.0;
  double frequency = 0.0;   // P(|Y(t) - Y(s)| >= ε)
  double k_needed = 0.0;    // frequency·ε^p / ‖s-t‖^{p/2}
};

struct HolderReport {
  std::size_t d = 1;
  double p = 2.0;
  double threshold = 0.0;
  bool p_above_threshold = false;
  double gamma = 0.0;
  double gamma_limit = 0.0;  // 1/2 - d/p
  bool admissible = false;
  std::vector<HolderRow> rows;
  double fitted_k = 0.0;    // max k_needed: one K valid for every row
  double moment_k = 0.0;    // max mean|ΔY|^p / ‖s-t‖^{p/2}
  bool k_consistent = false;  // fitted_k <= moment_k (Markov)
  double modulus_mean = 0.0;  // sup |ΔY| / ‖s-t‖^γ per path
  double modulus_q95 = 0.0;
  double modulus_max = 0.0;
};

HolderReport holder_check(const PathSample& paths, double p, double gamma,
                          const std::vector<double>& epsilons);

}  // namespace orthodec
