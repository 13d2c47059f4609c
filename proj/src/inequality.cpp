#include "orthodec/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "orthodec/error.hpp"

namespace orthodec {

namespace {

double log_sum_exp(const std::vector<double>& a) {
  if (a.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(a.begin(), a.end());
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double v : a) s += std::exp(v - top);
  return top + std::log(s);
}

double normal_cdf(double x, double sd) { return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0))); }

double euclid(const std::vector<double>& s, const std::vector<double>& t) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) acc += (s[k] - t[k]) * (s[k] - t[k]);
  return std::sqrt(acc);
}

double quantile(std::vector<double> v, double level) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(v.size()))) ;
  return v[std::min(v.size() - 1, k == 0 ? 0 : k - 1)];
}

}  // namespace

YoungFunctionSpec YoungFunctionSpec::psi(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("Young function exponent must be positive");
  YoungFunctionSpec y;
  y.kind = Kind::psi;
  y.alpha = alpha;
  y.h = alpha < 1.0 ? std::pow((1.0 - alpha) / alpha, 1.0 / alpha) : 0.0;
  return y;
}

YoungFunctionSpec YoungFunctionSpec::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("power Young function needs p >= 1");
  YoungFunctionSpec y;
  y.kind = Kind::power;
  y.alpha = p;
  return y;
}

double young_eval(const YoungFunctionSpec& psi, double x) {
  if (!(x >= 0.0)) throw InputError("Young functions are evaluated on [0, inf)");
  if (psi.kind == YoungFunctionSpec::Kind::power) return std::pow(x, psi.alpha);
  return std::exp(std::pow(x + psi.h, psi.alpha)) - std::exp(std::pow(psi.h, psi.alpha));
}

double young_eval(double alpha, double x) { return young_eval(YoungFunctionSpec::psi(alpha), x); }

BetaExponent beta_exponent(double q, std::size_t d) {
  if (d == 0) throw InputError("d must be at least 1");
  const double limit = 2.0 / static_cast<double>(d);
  if (!(q > 0.0) || q > limit) {
    throw InputError("q must lie in (0, 2/d] = (0, " + std::to_string(limit) + "]");
  }
  if (q == limit) return {std::numeric_limits<double>::infinity(), true};
  return {2.0 * q / (2.0 - static_cast<double>(d) * q), false};
}

double luxemburg_norm(const std::vector<double>& sample, const YoungFunctionSpec& psi) {
  if (sample.empty()) throw InputError("luxemburg_norm needs a non-empty sample");
  double top = 0.0;
  for (double z : sample) {
    if (!std::isfinite(z)) throw InputError("luxemburg_norm: non-finite sample value");
    top = std::max(top, std::abs(z));
  }
  if (top == 0.0) return 0.0;
  const double log_n = std::log(static_cast<double>(sample.size()));
  std::vector<double> terms;
  terms.reserve(sample.size());
  // ok(c) <=> mean ψ(|Z|/c) <= 1, evaluated through logarithms.
  auto ok = [&](double c) {
    terms.clear();
    if (psi.kind == YoungFunctionSpec::Kind::power) {
      for (double z : sample)
        if (z != 0.0) terms.push_back(psi.alpha * (std::log(std::abs(z)) - std::log(c)));
      return log_sum_exp(terms) - log_n <= 0.0;
    }
    for (double z : sample) terms.push_back(std::pow(std::abs(z) / c + psi.h, psi.alpha));
    const double level = std::log1p(std::exp(std::pow(psi.h, psi.alpha)));
    return log_sum_exp(terms) - log_n <= level;
  };
  double hi = top;
  while (!ok(hi)) hi *= 2.0;
  double lo = hi / 2.0;
  while (ok(lo)) {
    hi = lo;
    lo /= 2.0;
  }
  while (hi - lo > 1e-11 * hi) {
    const double mid = std::sqrt(lo * hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------

std::string to_string(MomentMethod m) {
  return m == MomentMethod::exact_factorized ? "exact_factorized" : "monte_carlo";
}

double rademacher_sum_norm(std::int64_t m, double p) {
  if (m < 1) throw InputError("rademacher_sum_norm needs m >= 1");
  if (!(p >= 1.0)) throw InputError("p must be at least 1");
  // prob[k] = P(exactly k of the m signs are +1).
  std::vector<double> prob{1.0};
  for (std::int64_t step = 0; step < m; ++step) {
    std::vector<double> next(prob.size() + 1, 0.0);
    for (std::size_t k = 0; k < prob.size(); ++k) {
      next[k] += 0.5 * prob[k];
      next[k + 1] += 0.5 * prob[k];
    }
    prob = std::move(next);
  }
  double moment = 0.0;
  for (std::size_t k = 0; k < prob.size(); ++k)
    moment += prob[k] * std::pow(std::abs(2.0 * static_cast<double>(k) - static_cast<double>(m)), p);
  return std::pow(moment, 1.0 / p);
}

MomentRatioReport moment_ratio_product_exact(const std::vector<std::int64_t>& terms, double p) {
  if (terms.empty()) throw InputError("need at least one axis");
  if (!(p > 1.0)) throw InputError("moment_ratio needs p > 1");
  MomentRatioReport r;
  r.d = terms.size();
  r.p = p;
  r.terms = terms;
  r.method = MomentMethod::exact_factorized;
  r.measured = 1.0;
  double count = 1.0;
  for (auto m : terms) {
    r.measured *= rademacher_sum_norm(m, p);
    count *= static_cast<double>(m);
  }
  r.reference = std::sqrt(count);  // ‖Z_k‖_p = 1
  r.ratio = r.measured / r.reference;
  r.ci_low = r.ci_high = r.ratio;
  return r;
}

MomentRatioReport moment_ratio(const ExperimentSpec& spec, double p, MomentMethod method, std::size_t workers) {
  if (!(p > 1.0)) throw InputError("moment_ratio needs p > 1");
  validate(spec);
  if (method == MomentMethod::exact_factorized) {
    if (spec.field != FieldKind::product_omd) {
      throw InputError("the exact factorized method applies to the product field only");
    }
    return moment_ratio_product_exact(std::vector<std::int64_t>(spec.d, spec.n), p);
  }
  if (spec.replicas < 100) throw InputError("Monte Carlo moment ratio needs at least 100 replicas");
  ExperimentSpec run = spec;
  run.statistic = StatisticKind::endpoint;
  const EmpiricalSample sample = run_experiment(run, workers);
  const double unscale = std::pow(static_cast<double>(spec.n), static_cast<double>(spec.d) / 2.0);

  double single = 1.0;
  switch (spec.field) {
    case FieldKind::product_omd:
      single = 1.0;
      break;
    case FieldKind::iid: {
      const auto m = spec.law.abs_moment(p);
      if (!m) throw NotIntegrableError("innovation law lacks the moment of order " + std::to_string(p));
      single = std::pow(*m, 1.0 / p);
      break;
    }
    case FieldKind::linear:
      single = lp_norm_estimate(spec.coeffs, spec.law, p, std::max<std::size_t>(spec.replicas, 100),
                                spec.seed ^ 0x5A5A5A5Aull, false)
                   .estimate;
      break;
  }

  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t r = 0; r < sample.replicas; ++r) {
    const double x = std::pow(std::abs(unscale * sample.at(r, 0)), p);
    const double delta = x - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (x - mean);
  }
  const double n = static_cast<double>(sample.replicas);
  const double se_mean = std::sqrt(m2 / (n - 1.0) / n);

  MomentRatioReport rep;
  rep.d = spec.d;
  rep.p = p;
  rep.terms.assign(spec.d, spec.n);
  rep.method = MomentMethod::monte_carlo;
  rep.replicas = spec.replicas;
  rep.seed = spec.seed;
  rep.measured = std::pow(mean, 1.0 / p);
  rep.reference = std::pow(static_cast<double>(spec.n), static_cast<double>(spec.d) / 2.0) * single;
  rep.ratio = rep.measured / rep.reference;
  rep.std_error = mean > 0.0 ? rep.ratio / (p * mean) * se_mean : 0.0;
  rep.ci_low = std::pow(std::max(0.0, mean - 1.96 * se_mean), 1.0 / p) / rep.reference;
  rep.ci_high = std::pow(mean + 1.96 * se_mean, 1.0 / p) / rep.reference;
  return rep;
}

// ---------------------------------------------------------------------------

double default_ks_threshold(std::size_t n) {
  if (n == 0) throw InputError("empty sample");
  return 2.0 * 1.36 / std::sqrt(static_cast<double>(n));
}

KSReport gaussian_limit_test(std::vector<double> sample, double target_variance, std::optional<double> threshold) {
  if (sample.empty()) throw InputError("gaussian_limit_test needs a non-empty sample");
  if (!(target_variance > 0.0) || !std::isfinite(target_variance)) {
    throw InputError("target variance must be positive and finite");
  }
  for (double v : sample)
    if (!std::isfinite(v)) throw InputError("gaussian_limit_test: non-finite sample value");
  KSReport rep;
  rep.sample_size = sample.size();
  rep.target_variance = target_variance;
  rep.threshold = threshold.value_or(default_ks_threshold(sample.size()));
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  if (*lo == *hi) {
    rep.degenerate = true;
    rep.pass = false;
    rep.statistic = 1.0;
    return rep;
  }
  std::sort(sample.begin(), sample.end());
  const double sd = std::sqrt(target_variance);
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i], sd);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  rep.statistic = d;
  rep.pass = d <= rep.threshold;
  return rep;
}

CovarianceReport covariance_structure_test(const EmpiricalSample& sample, const std::vector<Rect>& rects,
                                           const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                           double target_variance, double relative_tolerance,
                                           double se_multiplier) {
  if (sample.replicas < 1000) throw InputError("covariance_structure_test needs at least 1000 replicas");
  if (rects.size() != sample.width) throw InputError("one rectangle per sample column is required");
  CovarianceReport rep;
  rep.target_variance = target_variance;
  rep.relative_tolerance = relative_tolerance;
  rep.se_multiplier = se_multiplier;
  const double n = static_cast<double>(sample.replicas);
  for (const auto& [a, b] : pairs) {
    if (a >= sample.width || b >= sample.width) throw InputError("covariance pair column out of range");
    const auto x = sample.column(a);
    const auto y = sample.column(b);
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double mu = 0.0;
    double m2 = 0.0;
    for (std::size_t r = 0; r < sample.replicas; ++r) {
      const double u = (x[r] - mx) * (y[r] - my);
      const double delta = u - mu;
      mu += delta / static_cast<double>(r + 1);
      m2 += delta * (u - mu);
    }
    CovarianceCheck c;
    c.first = a;
    c.second = b;
    c.overlap = intersection_volume(rects[a], rects[b]);
    c.empirical = mu * n / (n - 1.0);
    c.target = target_variance * c.overlap;
    c.std_error = std::sqrt(m2 / (n - 1.0) / n);
    c.disjoint = c.overlap == 0.0;
    c.pass = c.disjoint ? std::abs(c.empirical) <= se_multiplier * c.std_error
                        : std::abs(c.empirical - c.target) <= relative_tolerance * c.target;
    rep.pass = rep.pass && c.pass;
    rep.checks.push_back(c);
  }
  return rep;
}

// ---------------------------------------------------------------------------

double tail_reference(double terms, double single_norm) {
  if (!(terms > 0.0) || !(single_norm >= 0.0)) throw InputError("tail reference needs positive inputs");
  return std::sqrt(terms) * single_norm;
}

TailReport tail_bound_check(const std::vector<double>& abs_sample, double q, std::size_t d, double reference,
                            const std::vector<double>& x_grid, bool bounded_field) {
  const BetaExponent beta = beta_exponent(q, d);
  if (beta.unbounded && !bounded_field) {
    throw InputError("q = 2/d requires a uniformly bounded field");
  }
  if (abs_sample.empty()) throw InputError("tail_bound_check needs a non-empty sample");
  if (!(reference > 0.0) || !std::isfinite(reference)) throw InputError("tail reference R must be positive");
  for (std::size_t k = 1; k < x_grid.size(); ++k)
    if (!(x_grid[k] > x_grid[k - 1])) throw InputError("x grid must be strictly increasing");
  TailReport rep;
  rep.q = q;
  rep.d = d;
  rep.h = YoungFunctionSpec::psi(q).h;
  rep.reference = reference;
  const double lead = 1.0 + std::exp(std::pow(rep.h, q));
  const double n = static_cast<double>(abs_sample.size());
  for (double x : x_grid) {
    if (!(x >= 0.0)) throw InputError("x grid must be non-negative");
    TailRow row;
    row.x = x;
    const auto hits = std::count_if(abs_sample.begin(), abs_sample.end(), [&](double v) { return std::abs(v) >= x; });
    row.frequency = static_cast<double>(hits) / n;
    if (row.frequency > 0.0 && x > 0.0) {
      const double level = std::log(lead / row.frequency);
      row.kappa_needed = x / (reference * (std::pow(level, 1.0 / q) - rep.h));
    }
    rep.kappa = std::max(rep.kappa, row.kappa_needed);
    rep.rows.push_back(row);
  }
  const double kappa = rep.kappa > 0.0 ? rep.kappa : 1.0;
  for (auto& row : rep.rows) row.bound = lead * std::exp(-std::pow(row.x / (kappa * reference) + rep.h, q));
  for (std::size_t k = 1; k < rep.rows.size(); ++k)
    rep.bound_decreasing = rep.bound_decreasing && rep.rows[k].bound < rep.rows[k - 1].bound;
  return rep;
}

// ---------------------------------------------------------------------------

double holder_threshold(std::size_t d) {
  if (d == 0) throw InputError("d must be at least 1");
  const double dd = static_cast<double>(d);
  return 4.0 / std::log2(4.0 * dd / (4.0 * dd - 3.0));
}

HolderReport holder_check(const PathSample& paths, double p, double gamma, const std::vector<double>& epsilons) {
  if (paths.points.empty()) throw InputError("holder_check needs evaluation points");
  if (paths.sample.width != paths.points.size()) throw InputError("path sample width does not match the point grid");
  if (!(p > 0.0)) throw InputError("p must be positive");
  if (!(gamma >= 0.0)) throw InputError("gamma must be non-negative");
  for (double e : epsilons)
    if (!(e > 0.0)) throw InputError("epsilons must be positive");
  HolderReport rep;
  rep.d = paths.points.front().size();
  rep.p = p;
  rep.threshold = holder_threshold(rep.d);
  rep.p_above_threshold = p > rep.threshold;
  rep.gamma = gamma;
  rep.gamma_limit = 0.5 - static_cast<double>(rep.d) / p;
  rep.admissible = gamma < rep.gamma_limit;

  const std::size_t reps = paths.sample.replicas;
  const std::size_t m = paths.points.size();
  std::vector<double> modulus(reps, 0.0);
  std::vector<double> diff(reps);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dist = euclid(paths.points[i], paths.points[j]);
      if (dist == 0.0) continue;
      const double scale = std::pow(dist, p / 2.0);
      const double hscale = std::pow(dist, gamma);
      double moment = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        diff[r] = std::abs(paths.sample.at(r, j) - paths.sample.at(r, i));
        moment += std::pow(diff[r], p);
        modulus[r] = std::max(modulus[r], diff[r] / hscale);
      }
      moment /= static_cast<double>(reps);
      rep.moment_k = std::max(rep.moment_k, moment / scale);
      for (double eps : epsilons) {
        HolderRow row;
        row.first = i;
        row.second = j;
        row.distance = dist;
        row.epsilon = eps;
        const auto hits = std::count_if(diff.begin(), diff.end(), [&](double v) { return v >= eps; });
        row.frequency = static_cast<double>(hits) / static_cast<double>(reps);
        row.k_needed = row.frequency * std::pow(eps, p) / scale;
        rep.fitted_k = std::max(rep.fitted_k, row.k_needed);
        rep.rows.push_back(row);
      }
    }
  }
  rep.k_consistent = std::isfinite(rep.fitted_k) && rep.fitted_k <= rep.moment_k;
  rep.modulus_mean = std::accumulate(modulus.begin(), modulus.end(), 0.0) / static_cast<double>(reps);
  rep.modulus_q95 = quantile(modulus, 0.95);
  rep.modulus_max = *std::max_element(modulus.begin(), modulus.end());
  return rep;
}

}  // namespace orthodec
