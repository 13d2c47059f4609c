#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "orthodec/decomposition.hpp"
#include "orthodec/error.hpp"
#include "orthodec/inequality.hpp"
#include "orthodec/io.hpp"
#include "orthodec/simulation.hpp"
#include "orthodec/vc_entropy.hpp"

namespace orthodec::cli {

namespace {

struct RunConfig {
  std::string command;
  std::string check;  // verify target
  std::string in;
  std::string out;
  std::string config;
  std::size_t d = 2;
  std::int64_t n = 64;
  double p = 2.0;
  double q = 1.0;
  double gamma = 0.2;
  std::size_t replicas = 1000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string format = "json";
  bool no_timestamp = false;

  std::size_t axis = 0;  // 0: every axis
  std::string algebra = "shifted_past";
  bool linear = false;
  std::int64_t cap = 10000;
  std::string engine = "auto";
  Json law;  // name or object; null picks the command default
  std::string field;
  std::string statistic = "endpoint";
  int level = -1;  // -1: command default
  std::vector<double> t;
  double target_variance = 0.0;  // 0: symbolic default
  bool x0_variance = false;
  double ks_threshold = 0.0;     // 0: default
  double rel_tol = 0.1;
  double kappa = 3.0;
  std::string method;
  std::string set_class = "Q2";
  std::size_t max_n = 6;
  bool entropy = false;
  std::vector<double> eps;

  Json file = Json::object();  // the --config document
  std::string input_text;
};

/// Registers an option whose value falls back to the --config document when
/// the flag is absent.
class Options {
 public:
  explicit Options(RunConfig& cfg) : cfg_(cfg) {}

  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& key, T& target, const std::string& help) {
    CLI::Option* o = app->add_option("--" + key, target, help);
    fillers_.push_back([app, o, key, &target](const Json& file) {
      if (app->parsed() && o->count() == 0 && file.contains(key)) target = file[key].get<T>();
    });
    return o;
  }

  CLI::Option* flag(CLI::App* app, const std::string& key, bool& target, const std::string& help) {
    CLI::Option* o = app->add_flag("--" + key, target, help);
    fillers_.push_back([app, o, key, &target](const Json& file) {
      if (app->parsed() && o->count() == 0 && file.contains(key)) target = file[key].get<bool>();
    });
    return o;
  }

  void law(CLI::App* app) {
    auto* o = app->add_option("--law", law_flag_, "innovation law: rademacher | gaussian | gaussian:<var>");
    fillers_.push_back([this, app, o](const Json& file) {
      if (!app->parsed()) return;
      if (o->count() > 0) {
        cfg_.law = law_flag_;
      } else if (file.contains("law")) {
        cfg_.law = file["law"];
      }
    });
  }

  // Only the parsed subcommand's fillers fire; several subcommands share keys.
  void apply(const Json& file) {
    for (auto& f : fillers_) f(file);
  }

 private:
  RunConfig& cfg_;
  std::string law_flag_;
  std::vector<std::function<void(const Json&)>> fillers_;
};

void add_common(CLI::App* app, Options& o, RunConfig& cfg) {
  app->add_option("--config", cfg.config, "JSON file with option values (flags take precedence)");
  o.add(app, "out", cfg.out, "output path (default: stdout)");
  o.add(app, "seed", cfg.seed, "master seed");
  o.add(app, "workers", cfg.workers, "worker threads (default: $ORTHODEC_WORKERS or 1)");
  o.add(app, "format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  o.flag(app, "no-timestamp", cfg.no_timestamp, "omit the timestamp from reports");
}

void add_field(CLI::App* app, Options& o, RunConfig& cfg) {
  o.add(app, "in", cfg.in, "coefficient file for linear fields");
  o.add(app, "field", cfg.field, "linear | product_omd | iid");
  o.add(app, "d", cfg.d, "dimension");
  o.add(app, "n", cfg.n, "grid size per axis");
  o.add(app, "replicas", cfg.replicas, "Monte Carlo replicas");
  o.law(app);
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Everything that determines the numbers in a report; output location,
/// worker count and timestamp switch are excluded.
Json effective_config(const RunConfig& c) {
  return {{"command", c.command},     {"check", c.check},
          {"d", c.d},                 {"n", c.n},
          {"p", c.p},                 {"q", c.q},
          {"gamma", c.gamma},         {"replicas", c.replicas},
          {"seed", c.seed},           {"format", c.format},
          {"axis", c.axis},           {"algebra", c.algebra},
          {"linear", c.linear},       {"cap", c.cap},
          {"engine", c.engine},       {"law", c.law},
          {"field", c.field},         {"statistic", c.statistic},
          {"level", c.level},         {"t", c.t},
          {"target_variance", c.target_variance},
          {"x0_variance", c.x0_variance},
          {"ks_threshold", c.ks_threshold},
          {"rel_tol", c.rel_tol},     {"kappa", c.kappa},
          {"method", c.method},       {"class", c.set_class},
          {"max_n", c.max_n},         {"entropy", c.entropy},
          {"eps", c.eps},             {"file", c.file},
          {"input_hash", hex64(fnv1a(c.input_text))}};
}

Json meta(const RunConfig& c, const std::string& target) {
  Json m = {{"version", kVersion},
            {"command", c.check.empty() ? c.command : c.command + " " + c.check},
            {"seed", c.seed},
            {"replicas", c.replicas},
            {"config_hash", hex64(fnv1a(effective_config(c).dump()))},
            {"target", target}};
  if (!c.no_timestamp) m["timestamp"] = timestamp();
  return m;
}

void emit(const RunConfig& c, Json report, const std::string& target, const std::string& csv, std::ostream& out) {
  const Json m = meta(c, target);
  std::string text;
  if (c.format == "csv" && !csv.empty()) {
    text = "# version=" + m["version"].get<std::string>() + " seed=" + std::to_string(c.seed) +
           " replicas=" + std::to_string(c.replicas) + " config_hash=" + m["config_hash"].get<std::string>() + "\n" +
           csv;
  } else {
    report["meta"] = m;
    text = report.dump(2) + "\n";
  }
  if (c.out.empty()) {
    out << text;
  } else {
    write_file(c.out, text);
  }
}

ChaosElement read_chaos(const RunConfig& c) {
  if (!c.in.empty()) return chaos_from_json(Json::parse(c.input_text));
  if (c.file.contains("coeffs")) return chaos_from_json(c.file["coeffs"]);
  throw InputError("no input element: pass --in or a \"coeffs\" entry in --config");
}

/// Coefficients 2^{-|j|} on {0,1}^d: a short-memory linear field.
ChaosElement default_coefficients(std::size_t d) {
  ChaosElement a(d);
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    MultiIndex j = MultiIndex::zero(d);
    int ones = 0;
    for (std::size_t s = 0; s < d; ++s)
      if (mask & (1u << s)) {
        j[s] = 1;
        ++ones;
      }
    a.set(j, std::ldexp(1.0, -ones));
  }
  return a;
}

InnovationLaw resolve_law(const RunConfig& c, const std::string& fallback) {
  return law_from_json(c.law.is_null() ? Json(fallback) : c.law);
}

ExperimentSpec field_spec(const RunConfig& c, const std::string& default_field, const std::string& default_law) {
  ExperimentSpec spec;
  spec.field = field_kind_from_string(c.field.empty() ? default_field : c.field);
  spec.law = resolve_law(c, default_law);
  spec.n = c.n;
  spec.replicas = c.replicas;
  spec.seed = c.seed;
  spec.d = c.d;
  if (spec.field == FieldKind::linear) {
    spec.coeffs = (!c.in.empty() || c.file.contains("coeffs")) ? read_chaos(c) : default_coefficients(c.d);
    spec.d = spec.coeffs.dim();
  }
  return spec;
}

/// E[m²] (or E[X_0²]) of the field: the variance of the Brownian limit.
double limit_variance(const ExperimentSpec& spec, bool x0) {
  switch (spec.field) {
    case FieldKind::linear: {
      if (x0) return std::pow(l2_norm(spec.coeffs, spec.law), 2.0);
      return std::pow(l2_norm(decompose(spec.coeffs).m, spec.law), 2.0);
    }
    case FieldKind::product_omd:
      return 1.0;
    case FieldKind::iid:
      return spec.law.variance();
  }
  return 1.0;
}

// ---------------------------------------------------------------------------

int cmd_decompose(const RunConfig& c, std::ostream& out) {
  const ChaosElement f = read_chaos(c);
  const Decomposition dec = c.engine == "generic" ? decompose_generic(f) : decompose(f);
  const bool exact = reconstruct(dec) == f;
  const OmdReport omd = omd_verify(dec);
  Json report = to_json(dec);
  report["omd"] = to_json(omd);
  report["reconstruction_exact"] = exact;
  report["engine"] = c.engine == "generic" ? "generic" : "auto";
  emit(c, report, "orthomartingale-coboundary decomposition: exact reconstruction and OMD residuals", "", out);
  return omd.pass && exact ? kPass : kNumericFailure;
}

int cmd_reconstruct(const RunConfig& c, std::ostream& out) {
  const Decomposition dec = decomposition_from_json(Json::parse(c.input_text));
  const std::string text = to_json(reconstruct(dec)).dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
  } else {
    write_file(c.out, text);
  }
  return kPass;
}

int cmd_check_condition(const RunConfig& c, std::ostream& out) {
  const ChaosElement f = read_chaos(c);
  const InnovationLaw law = resolve_law(c, "rademacher");
  SeriesOptions opt;
  opt.cap = c.cap;
  opt.seed = c.seed;
  opt.replicas = std::max<std::size_t>(c.replicas, 100);
  const auto kind = c.algebra == "half_space" ? SigmaAlgebraSpec::Kind::half_space : SigmaAlgebraSpec::Kind::shifted_past;
  std::vector<std::size_t> axes;
  if (c.axis == 0) {
    for (std::size_t s = 1; s <= f.dim(); ++s) axes.push_back(s);
  } else {
    axes.push_back(c.axis);
  }
  bool pass = true;
  Json series = Json::array();
  Json linear = Json::array();
  for (auto s : axes) {
    const SeriesReport r = series_condition(f, s, c.p, law, kind, opt);
    pass = pass && r.converged;
    series.push_back(to_json(r));
    if (c.linear) {
      const LinearConditionReport lr = linear_condition(f, s, std::max(2.0, c.p), law, opt);
      pass = pass && lr.l2.converged && lr.half_space_matches;
      linear.push_back(to_json(lr));
    }
  }
  Json report = {{"series", series}};
  if (c.linear) report["linear"] = linear;
  emit(c, report, "projective series condition sum_k k^(d-1) ||E[f | algebra(k)]||_p", "", out);
  return pass ? kPass : kNumericFailure;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  ExperimentSpec spec = field_spec(c, "linear", "rademacher");
  Json report;
  std::string csv;
  if (c.statistic == "paths") {
    const PathSample paths = sample_paths(spec, c.level < 0 ? 3 : c.level, c.workers);
    report = {{"n", paths.n}, {"points", paths.points}, {"summary", summary_json(paths.sample)}, {"values", paths.sample.values}};
    csv = paths_csv(paths);
  } else {
    spec.statistic = statistic_kind_from_string(c.statistic);
    if (spec.statistic == StatisticKind::fixed_points) {
      if (c.file.contains("points")) {
        spec.points = c.file["points"].get<std::vector<std::vector<double>>>();
      } else {
        spec.points = {c.t.empty() ? std::vector<double>(spec.d, 1.0) : c.t};
      }
    }
    if (spec.statistic == StatisticKind::rectangles) {
      if (!c.file.contains("rects")) throw InputError("rectangles statistic needs a \"rects\" list in --config");
      for (const auto& r : c.file["rects"]) spec.rectangles.push_back(rect_from_json(r));
    }
    spec.grid_level = c.level < 0 ? 3 : c.level;
    spec.gamma = c.gamma;
    const EmpiricalSample sample = run_experiment(spec, c.workers);
    report = {{"summary", summary_json(sample)}, {"values", sample.values}};
    csv = sample_csv(sample);
  }
  report["field"] = to_string(spec.field);
  report["law"] = to_json(spec.law);
  report["d"] = spec.d;
  report["n"] = spec.n;
  emit(c, report, "normalized partial sums n^(-d/2) S_n of a stationary field", csv, out);
  return kPass;
}

int verify_clt(const RunConfig& c, std::ostream& out) {
  ExperimentSpec spec = field_spec(c, "linear", "rademacher");
  const std::vector<double> t = c.t.empty() ? std::vector<double>(spec.d, 1.0) : c.t;
  spec.statistic = StatisticKind::fixed_points;
  spec.points = {t};
  const double base = limit_variance(spec, c.x0_variance);
  const double target = c.target_variance > 0.0 ? c.target_variance : base * Rect::quadrant(t).volume();
  const EmpiricalSample sample = run_experiment(spec, c.workers);
  const KSReport ks = gaussian_limit_test(sample.column(0), target,
                                          c.ks_threshold > 0.0 ? std::optional<double>(c.ks_threshold) : std::nullopt);
  Json report = {{"ks", to_json(ks)}, {"t", t}, {"limit_variance", base}, {"variance_source", c.x0_variance ? "E[X0^2]" : "E[m^2]"}};
  emit(c, report, "Gaussian limit of n^(-d/2) S_n([0,t]) with variance E[m^2] lambda([0,t])", "", out);
  return ks.pass ? kPass : kNumericFailure;
}

int verify_wip(const RunConfig& c, std::ostream& out) {
  ExperimentSpec spec = field_spec(c, "linear", "rademacher");
  const std::size_t d = spec.d;
  std::vector<Rect> rects;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (c.file.contains("rects")) {
    for (const auto& r : c.file["rects"]) rects.push_back(rect_from_json(r));
    pairs = c.file.at("pairs").get<std::vector<std::pair<std::size_t, std::size_t>>>();
  } else {
    const std::vector<double> zero(d, 0.0);
    rects.push_back(Rect(zero, std::vector<double>(d, 0.5)));
    rects.push_back(Rect::unit(d));
    rects.push_back(Rect(std::vector<double>(d, 0.25), std::vector<double>(d, 0.75)));
    std::vector<double> lo(d, 0.0);
    std::vector<double> hi(d, 0.5);
    lo[0] = 0.75;
    hi[0] = 1.0;
    rects.push_back(Rect(lo, hi));
    pairs = {{0, 1}, {0, 2}, {0, 3}};
  }
  spec.statistic = StatisticKind::rectangles;
  spec.rectangles = rects;
  const double base = c.target_variance > 0.0 ? c.target_variance : limit_variance(spec, c.x0_variance);
  const EmpiricalSample sample = run_experiment(spec, c.workers);
  const CovarianceReport cov = covariance_structure_test(sample, rects, pairs, base, c.rel_tol);
  Json rj = Json::array();
  for (const auto& r : rects) rj.push_back(to_json(r));
  Json report = {{"covariance", to_json(cov)}, {"rects", rj}};
  emit(c, report, "covariance of the Brownian limit: Cov(W(A), W(B)) = E[m^2] lambda(A n B)", "", out);
  return cov.pass ? kPass : kNumericFailure;
}

int verify_moment(const RunConfig& c, std::ostream& out) {
  const ExperimentSpec spec = field_spec(c, "product_omd", "rademacher");
  const std::string method = c.method.empty() ? (spec.field == FieldKind::product_omd ? "exact" : "monte_carlo") : c.method;
  const MomentMethod m = method == "exact" || method == "exact_factorized" ? MomentMethod::exact_factorized
                                                                             : MomentMethod::monte_carlo;
  const MomentRatioReport r = moment_ratio(spec, c.p, m, c.workers);
  const double envelope = c.kappa * std::pow(c.p, static_cast<double>(spec.d) / 2.0);
  Json report = {{"moment", to_json(r)}, {"kappa", c.kappa}, {"envelope", envelope}};
  emit(c, report, "moment inequality ||sum X_k||_p <= kappa p^(d/2) (sum ||X_k||_p^2)^(1/2)", "", out);
  return std::isfinite(r.ratio) && r.ratio <= envelope ? kPass : kNumericFailure;
}

int verify_tail(const RunConfig& c, std::ostream& out) {
  ExperimentSpec spec = field_spec(c, "product_omd", "rademacher");
  spec.statistic = StatisticKind::endpoint;
  const EmpiricalSample sample = run_experiment(spec, c.workers);
  std::vector<double> abs_sample = sample.column(0);
  for (double& v : abs_sample) v = std::abs(v);
  const BetaExponent beta = beta_exponent(c.q, spec.d);
  // Single-site norm ‖X_0‖ in the Orlicz space of ψ_β, or the sup norm when β is unbounded.
  double single = 1.0;
  bool bounded = true;
  if (spec.field == FieldKind::linear) {
    double abs_sum = 0.0;
    for (const auto& [j, a] : spec.coeffs.coeffs()) abs_sum += std::abs(a);
    bounded = std::isfinite(spec.law.sup_norm());
    if (beta.unbounded) {
      single = abs_sum * spec.law.sup_norm();
    } else {
      std::vector<double> x0(spec.replicas);
      for (std::size_t r = 0; r < spec.replicas; ++r)
        x0[r] = evaluate(spec.coeffs, InnovationField(spec.law, spec.seed ^ 0xA5A5ull, r), MultiIndex::zero(spec.d));
      single = luxemburg_norm(x0, YoungFunctionSpec::psi(beta.value));
    }
  } else if (spec.field == FieldKind::iid) {
    bounded = std::isfinite(spec.law.sup_norm());
    single = beta.unbounded ? spec.law.sup_norm() : 1.0;
  }
  // Normalized sums: R = n^{-d/2} sqrt(n^d) ‖X_0‖ = ‖X_0‖.
  const double reference = tail_reference(1.0, single);
  std::vector<double> grid;
  if (c.file.contains("x")) {
    grid = c.file["x"].get<std::vector<double>>();
  } else {
    for (int k = 1; k <= 10; ++k) grid.push_back(0.5 * k * reference);
  }
  const TailReport r = tail_bound_check(abs_sample, c.q, spec.d, reference, grid, bounded);
  Json report = {{"tail", to_json(r)}, {"beta", beta.unbounded ? Json(nullptr) : Json(beta.value)}, {"bounded_field", bounded}};
  emit(c, report, "sub-exponential tail bound (1 + e^{h^q}) exp(-(x/(kappa R) + h)^q)", tail_csv(r), out);
  return r.bound_decreasing && std::isfinite(r.kappa) ? kPass : kNumericFailure;
}


int verify_holder(const RunConfig& c, std::ostream& out) {
  ExperimentSpec spec = field_spec(c, "linear", "gaussian");
  const int level = c.level < 0 ? 3 : c.level;
  const double sd = std::sqrt(limit_variance(spec, false));
  std::vector<double> eps = c.eps;
  if (eps.empty()) eps = {0.25 * sd, 0.5 * sd, sd, 2.0 * sd};
  const PathSample paths = sample_paths(spec, level, c.workers);
  const HolderReport r = holder_check(paths, c.p, c.gamma, eps);
  Json report = {{"holder", to_json(r, false)}, {"level", level}};
  emit(c, report, "Hoelder tightness: P(|Y(t)-Y(s)| >= eps) <= K eps^-p |t-s|^(p/2), gamma < 1/2 - d/p",
       holder_csv(r), out);
  return r.admissible && r.k_consistent && r.p_above_threshold ? kPass : kNumericFailure;
}

int cmd_vc(const RunConfig& c, std::ostream& out) {
  const SetClass cls = set_class_from_string(c.set_class, c.level < 0 ? 8 : c.level);
  const VcResult vc = vc_index(cls, c.max_n);
  Json report = {{"class", cls.name()}, {"vc", to_json(vc)}};
  bool pass = vc.exact;
  std::string csv;
  if (c.entropy) {
    std::vector<double> eps = c.eps;
    if (eps.empty()) {
      const double lo = std::min(1.0, 4.0 * discretization_error(cls) * 1.05);
      const int steps = 12;
      for (int k = 0; k < steps; ++k) eps.push_back(lo * std::pow(1.0 / lo, static_cast<double>(k) / (steps - 1)));
      eps.back() = 1.0;
    }
    const CoveringReport cov = entropy_integral(cls, eps, c.p, vc.index);
    report["covering"] = to_json(cov);
    csv = covering_csv(cov);
    pass = pass && cov.dudley_finite;
  }
  emit(c, report, "VC index (smallest n with no shattered n-set) and metric entropy under rho = sqrt(lambda(A delta B))",
       csv, out);
  return pass ? kPass : kNumericFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("ORTHODEC_WORKERS")) {
    try {
      cfg.workers = static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      err << "error: ORTHODEC_WORKERS must be a positive integer\n";
      return kUsageError;
    }
  }
  Options opts(cfg);
  CLI::App app{"Martingale plus coboundary splitting of linear random fields, with limit-theorem checks", "orthodec"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  auto* decompose_cmd = app.add_subcommand("decompose", "decompose a linear-chaos element");
  add_common(decompose_cmd, opts, cfg);
  opts.add(decompose_cmd, "in", cfg.in, "element JSON")->required();
  opts.add(decompose_cmd, "engine", cfg.engine, "auto | generic")->check(CLI::IsMember({"auto", "generic"}));

  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "rebuild f from a decomposition");
  add_common(reconstruct_cmd, opts, cfg);
  opts.add(reconstruct_cmd, "in", cfg.in, "decomposition JSON")->required();

  auto* check_cmd = app.add_subcommand("check-condition", "evaluate projective series conditions");
  add_common(check_cmd, opts, cfg);
  opts.add(check_cmd, "in", cfg.in, "element JSON");
  opts.add(check_cmd, "axis", cfg.axis, "axis 1..d (0: all)");
  opts.add(check_cmd, "p", cfg.p, "norm exponent");
  opts.add(check_cmd, "algebra", cfg.algebra, "shifted_past | half_space")
      ->check(CLI::IsMember({"shifted_past", "half_space"}));
  opts.flag(check_cmd, "linear", cfg.linear, "also evaluate the linear-field l2 and Rosenthal series");
  opts.add(check_cmd, "cap", cfg.cap, "maximal lag");
  opts.add(check_cmd, "replicas", cfg.replicas, "Monte Carlo replicas for p != 2");
  opts.law(check_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "sample normalized partial sums");
  add_common(simulate_cmd, opts, cfg);
  add_field(simulate_cmd, opts, cfg);
  opts.add(simulate_cmd, "statistic", cfg.statistic, "endpoint | fixed_points | rectangles | sup_modulus | paths")
      ->check(CLI::IsMember({"endpoint", "fixed_points", "rectangles", "sup_modulus", "paths"}));
  opts.add(simulate_cmd, "level", cfg.level, "dyadic grid level");
  opts.add(simulate_cmd, "gamma", cfg.gamma, "Hoelder exponent for sup_modulus");
  opts.add(simulate_cmd, "t", cfg.t, "evaluation point")->expected(1, -1);

  auto* verify_cmd = app.add_subcommand("verify", "run a verification");
  verify_cmd->require_subcommand(1);
  std::map<std::string, CLI::App*> checks;
  for (const char* name : {"clt", "wip", "moment", "tail", "holder"}) {
    auto* sub = verify_cmd->add_subcommand(name);
    add_common(sub, opts, cfg);
    add_field(sub, opts, cfg);
    checks[name] = sub;
  }
  checks["clt"]->description("KS test of the Gaussian limit at one point");
  opts.add(checks["clt"], "t", cfg.t, "evaluation point (default 1..1)")->expected(1, -1);
  opts.add(checks["clt"], "target-variance", cfg.target_variance, "override the limit variance at t");
  opts.flag(checks["clt"], "x0-variance", cfg.x0_variance, "use E[X_0^2] instead of E[m^2]");
  opts.add(checks["clt"], "ks-threshold", cfg.ks_threshold, "pass threshold (default 2 x 1.36/sqrt(N))");
  checks["wip"]->description("covariance structure of the limit");
  opts.add(checks["wip"], "target-variance", cfg.target_variance, "override E[m^2]");
  opts.flag(checks["wip"], "x0-variance", cfg.x0_variance, "use E[X_0^2] instead of E[m^2]");
  opts.add(checks["wip"], "rel-tol", cfg.rel_tol, "relative tolerance");
  checks["moment"]->description("moment inequality ratio");
  opts.add(checks["moment"], "p", cfg.p, "moment order");
  opts.add(checks["moment"], "method", cfg.method, "exact | monte_carlo");
  opts.add(checks["moment"], "kappa", cfg.kappa, "envelope constant");
  checks["tail"]->description("sub-exponential tail bound");
  opts.add(checks["tail"], "q", cfg.q, "Young exponent q in (0, 2/d]");
  checks["holder"]->description("Hoelder tightness diagnostics");
  opts.add(checks["holder"], "p", cfg.p, "moment order (default 8)");
  opts.add(checks["holder"], "gamma", cfg.gamma, "Hoelder exponent");
  opts.add(checks["holder"], "level", cfg.level, "dyadic grid level");
  opts.add(checks["holder"], "eps", cfg.eps, "exceedance levels")->expected(1, -1);

  auto* vc_cmd = app.add_subcommand("vc", "VC index and metric entropy of a rectangle class");
  add_common(vc_cmd, opts, cfg);
  opts.add(vc_cmd, "class", cfg.set_class, "Q<d> or Q'<d>");
  opts.add(vc_cmd, "max-n", cfg.max_n, "largest point-set size searched");
  opts.flag(vc_cmd, "entropy", cfg.entropy, "also compute covering numbers");
  opts.add(vc_cmd, "level", cfg.level, "dyadic parameter grid level");
  opts.add(vc_cmd, "eps", cfg.eps, "epsilon grid")->expected(1, -1);
  opts.add(vc_cmd, "p", cfg.p, "exponent of the N^(1/p) integral");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream sink;
    const int code = app.exit(e, sink, sink);
    (code == 0 ? out : err) << sink.str();
    return code == 0 ? kPass : kUsageError;
  }

  try {
    if (!cfg.config.empty()) {
      cfg.file = Json::parse(read_file(cfg.config));
      if (!cfg.file.is_object()) throw InputError("--config must hold a JSON object");
    }
    opts.apply(cfg.file);
    if (cfg.workers == 0) throw InputError("--workers must be positive");
    if (!cfg.in.empty()) cfg.input_text = read_file(cfg.in);
    // Hoelder tightness needs p above the dimension threshold; 8 clears it for d <= 2.
    if (checks["holder"]->parsed() && checks["holder"]->get_option("--p")->count() == 0 && !cfg.file.contains("p"))
      cfg.p = 8.0;

    if (decompose_cmd->parsed()) {
      cfg.command = "decompose";
      return cmd_decompose(cfg, out);
    }
    if (reconstruct_cmd->parsed()) {
      cfg.command = "reconstruct";
      return cmd_reconstruct(cfg, out);
    }
    if (check_cmd->parsed()) {
      cfg.command = "check-condition";
      return cmd_check_condition(cfg, out);
    }
    if (simulate_cmd->parsed()) {
      cfg.command = "simulate";
      return cmd_simulate(cfg, out);
    }
    if (vc_cmd->parsed()) {
      cfg.command = "vc";
      return cmd_vc(cfg, out);
    }
    cfg.command = "verify";
    for (const auto& [name, sub] : checks) {
      if (!sub->parsed()) continue;
      cfg.check = name;
      if (name == "clt") return verify_clt(cfg, out);
      if (name == "wip") return verify_wip(cfg, out);
      if (name == "moment") return verify_moment(cfg, out);
      if (name == "tail") return verify_tail(cfg, out);
      return verify_holder(cfg, out);
    }
    err << "error: no command\n";
    return kUsageError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace orthodec::cli
