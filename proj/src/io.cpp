#include "orthodec/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "orthodec/error.hpp"

namespace orthodec {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON has no infinity; unbounded values are written as null.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string algebra_name(SigmaAlgebraSpec::Kind k) {
  return k == SigmaAlgebraSpec::Kind::half_space ? "half_space" : "shifted_past";
}

MultiIndex index_from_json(const Json& j, std::size_t d) {
  if (!j.is_array() || j.size() != d) throw InputError("index must be an array of " + std::to_string(d) + " integers");
  std::vector<std::int64_t> c;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InputError("index coordinates must be integers");
    c.push_back(v.get<std::int64_t>());
  }
  return MultiIndex(std::move(c));
}

}  // namespace

Json to_json(const ChaosElement& f) {
  Json entries = Json::array();
  for (const auto& [j, c] : f.coeffs()) entries.push_back({{"index", j.coords()}, {"coeff", c}});
  return {{"d", f.dim()}, {"entries", entries}};
}

ChaosElement chaos_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("entries")) {
    throw InputError("chaos element JSON needs fields \"d\" and \"entries\"");
  }
  if (!j["d"].is_number_integer() || j["d"].get<std::int64_t>() < 1) throw InputError("\"d\" must be a positive integer");
  const auto d = j["d"].get<std::size_t>();
  if (!j["entries"].is_array()) throw InputError("\"entries\" must be an array");
  ChaosElement f(d);
  for (const auto& e : j["entries"]) {
    if (!e.is_object() || !e.contains("index") || !e.contains("coeff")) {
      throw InputError("each entry needs \"index\" and \"coeff\"");
    }
    const MultiIndex idx = index_from_json(e["index"], d);
    if (!e["coeff"].is_number()) throw InputError("coefficients must be numbers");
    const double c = e["coeff"].get<double>();
    if (!std::isfinite(c)) throw InputError("coefficients must be finite");
    if (f.coeffs().count(idx)) throw InputError("duplicate index " + idx.to_string());
    f.set(idx, c);
  }
  return f;
}

Json to_json(const Decomposition& dec) {
  Json mj = Json::object();
  for (const auto& [mask, h] : dec.boundary_terms) mj[std::to_string(mask)] = to_json(h);
  return {{"d", dec.dim}, {"m", to_json(dec.m)}, {"mJ", mj}, {"g", to_json(dec.corner)}};
}

Decomposition decomposition_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("g")) {
    throw InputError("decomposition JSON needs fields \"m\" and \"g\"");
  }
  ChaosElement m = chaos_from_json(j["m"]);
  Decomposition dec(m.dim());
  dec.m = std::move(m);
  dec.corner = chaos_from_json(j["g"]);
  if (dec.corner.dim() != dec.dim) throw InputError("\"g\" dimension differs from \"m\"");
  if (j.contains("mJ")) {
    for (const auto& [key, value] : j["mJ"].items()) {
      std::size_t pos = 0;
      unsigned long mask = 0;
      try {
        mask = std::stoul(key, &pos);
      } catch (const std::exception&) {
        throw InputError("mJ keys must be axis bitmasks, got '" + key + "'");
      }
      if (pos != key.size() || mask == 0 || mask >= full_mask(dec.dim)) {
        throw InputError("mJ key '" + key + "' is not a proper non-empty axis subset");
      }
      dec.set_term(static_cast<AxisMask>(mask), chaos_from_json(value));
    }
  }
  return dec;
}

InnovationLaw law_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "rademacher") return InnovationLaw::rademacher();
    if (s == "gaussian") return InnovationLaw::gaussian();
    if (s.rfind("gaussian:", 0) == 0) {
      try {
        return InnovationLaw::gaussian(std::stod(s.substr(9)));
      } catch (const std::invalid_argument&) {
        throw InputError("malformed gaussian variance in '" + s + "'");
      }
    }
    throw InputError("unknown innovation law '" + s + "'");
  }
  if (j.is_object() && j.value("kind", "") == "custom") {
    const double max_moment = j.contains("max_moment") && !j["max_moment"].is_null()
                                  ? j["max_moment"].get<double>()
                                  : std::numeric_limits<double>::infinity();
    return InnovationLaw::custom(j.at("points").get<std::vector<double>>(), j.at("probs").get<std::vector<double>>(),
                                 max_moment);
  }
  if (j.is_object() && j.contains("kind")) {
    Json inner = j["kind"];
    if (j.contains("variance") && inner == "gaussian") return InnovationLaw::gaussian(j["variance"].get<double>());
    return law_from_json(inner);
  }
  throw InputError("innovation law must be a name or an object with \"kind\"");
}

Json to_json(const InnovationLaw& law) {
  switch (law.kind()) {
    case InnovationLaw::Kind::rademacher:
      return {{"kind", "rademacher"}, {"variance", 1.0}};
    case InnovationLaw::Kind::gaussian:
      return {{"kind", "gaussian"}, {"variance", law.variance()}};
    case InnovationLaw::Kind::custom:
      return {{"kind", "custom"},
              {"points", law.points()},
              {"probs", law.probs()},
              {"max_moment", finite_or_null(law.max_finite_moment())}};
  }
  return nullptr;
}

Json to_json(const Rect& r) { return {{"lower", r.lower()}, {"upper", r.upper()}}; }

Rect rect_from_json(const Json& j) {
  if (j.is_array()) return Rect::quadrant(j.get<std::vector<double>>());
  if (!j.is_object() || !j.contains("upper")) throw InputError("rectangle needs \"upper\" (and optional \"lower\")");
  const auto upper = j["upper"].get<std::vector<double>>();
  const auto lower = j.contains("lower") ? j["lower"].get<std::vector<double>>() : std::vector<double>(upper.size(), 0.0);
  return Rect(lower, upper);
}

Json to_json(const OmdReport& r) {
  Json rows = Json::array();
  for (const auto& x : r.residuals) rows.push_back({{"mask", x.mask}, {"axis", x.axis}, {"residual", x.residual}});
  return {{"pass", r.pass}, {"residuals", rows}};
}

Json to_json(const SeriesReport& r) {
  Json terms = Json::array();
  for (std::size_t k = 0; k < r.terms.size(); ++k) {
    const auto& t = r.terms[k];
    terms.push_back({{"k", t.k},
                     {"weight", t.weight},
                     {"norm", t.norm},
                     {"std_error", t.std_error},
                     {"partial_sum", finite_or_null(r.partial_sums[k])}});
  }
  return {{"axis", r.axis},
          {"p", r.p},
          {"algebra", algebra_name(r.algebra)},
          {"terms", terms},
          {"truncation", r.truncation},
          {"converged", r.converged},
          {"inconclusive", r.inconclusive},
          {"infinite", r.infinite},
          {"total", finite_or_null(r.total)},
          {"tail_tolerance", r.tail_tolerance},
          {"exact", r.exact}};
}

Json to_json(const LinearConditionReport& r) {
  Json j = {{"l2", to_json(r.l2)},
            {"half_space_matches", r.half_space_matches},
            {"max_match_error", r.max_match_error}};
  if (r.has_rosenthal) j["rosenthal"] = to_json(r.rosenthal);
  return j;
}

Json to_json(const LpEstimate& r) {
  Json j = {{"p", r.p},
            {"estimate", r.estimate},
            {"std_error", r.std_error},
            {"ci", {r.ci_low, r.ci_high}},
            {"exact", r.exact},
            {"replicas", r.replicas},
            {"seed", r.seed}};
  if (r.has_bracket) {
    j["rosenthal_quadratic"] = r.rosenthal_quadratic;
    j["rosenthal_moment"] = r.rosenthal_moment;
  }
  return j;
}

Json to_json(const MomentRatioReport& r) {
  return {{"d", r.d},
          {"p", r.p},
          {"terms", r.terms},
          {"measured", r.measured},
          {"reference", r.reference},
          {"ratio", r.ratio},
          {"method", to_string(r.method)},
          {"std_error", r.std_error},
          {"ci", {r.ci_low, r.ci_high}},
          {"replicas", r.replicas},
          {"seed", r.seed}};
}

Json to_json(const KSReport& r) {
  return {{"sample_size", r.sample_size},
          {"target_variance", r.target_variance},
          {"statistic", r.statistic},
          {"threshold", r.threshold},
          {"pass", r.pass},
          {"degenerate", r.degenerate}};
}

Json to_json(const CovarianceReport& r) {
  Json rows = Json::array();
  for (const auto& c : r.checks) {
    rows.push_back({{"first", c.first},
                    {"second", c.second},
                    {"overlap", c.overlap},
                    {"empirical", c.empirical},
                    {"target", c.target},
                    {"std_error", c.std_error},
                    {"disjoint", c.disjoint},
                    {"pass", c.pass}});
  }
  return {{"target_variance", r.target_variance},
          {"relative_tolerance", r.relative_tolerance},
          {"se_multiplier", r.se_multiplier},
          {"checks", rows},
          {"pass", r.pass}};
}

Json to_json(const TailReport& r) {
  Json rows = Json::array();
  for (const auto& t : r.rows)
    rows.push_back({{"x", t.x}, {"frequency", t.frequency}, {"kappa_needed", t.kappa_needed}, {"bound", t.bound}});
  return {{"q", r.q},         {"d", r.d},         {"h", r.h}, {"reference", r.reference},
          {"rows", rows},     {"kappa", r.kappa}, {"bound_decreasing", r.bound_decreasing}};
}

Json to_json(const HolderReport& r, bool with_rows) {
  Json j = {{"d", r.d},
            {"p", r.p},
            {"threshold", r.threshold},
            {"p_above_threshold", r.p_above_threshold},
            {"gamma", r.gamma},
            {"gamma_limit", r.gamma_limit},
            {"admissible", r.admissible},
            {"fitted_k", r.fitted_k},
            {"moment_k", r.moment_k},
            {"k_consistent", r.k_consistent},
            {"modulus", {{"mean", r.modulus_mean}, {"q95", r.modulus_q95}, {"max", r.modulus_max}}},
            {"rows", r.rows.size()}};
  if (with_rows) {
    Json rows = Json::array();
    for (const auto& x : r.rows) {
      rows.push_back({{"s", x.first},
                      {"t", x.second},
                      {"distance", x.distance},
                      {"epsilon", x.epsilon},
                      {"frequency", x.frequency},
                      {"k_needed", x.k_needed}});
    }
    j["rows"] = rows;
  }
  return j;
}

Json to_json(const VcResult& r) {
  return {{"index", r.index}, {"exact", r.exact}, {"witness", r.witness}, {"configurations", r.configurations}};
}

Json to_json(const CoveringReport& r) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    rows.push_back({{"epsilon", r.epsilons[k]},
                    {"upper", r.upper[k]},
                    {"lower", r.lower[k]},
                    {"entropy", r.entropy[k]},
                    {"vw_envelope", r.vw_envelope[k]}});
  }
  return {{"class", r.class_name},
          {"d", r.d},
          {"level", r.level},
          {"delta", r.delta},
          {"rows", rows},
          {"fitted_exponent", r.fitted_exponent},
          {"fitted_log_constant", r.fitted_log_constant},
          {"dudley_integral", finite_or_null(r.dudley_integral)},
          {"dudley_finite", r.dudley_finite},
          {"p", r.p},
          {"np_integral", finite_or_null(r.np_integral)},
          {"np_finite", r.np_finite},
          {"vc", r.vc},
          {"vw_constant", r.vw_constant},
          {"vw_exponent", r.vw_exponent},
          {"below_envelope", r.below_envelope}};
}

Json summary_json(const EmpiricalSample& s) {
  Json cols = Json::array();
  for (std::size_t c = 0; c < s.width; ++c) {
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t r = 0; r < s.replicas; ++r) {
      const double x = s.at(r, c);
      const double delta = x - mean;
      mean += delta / static_cast<double>(r + 1);
      m2 += delta * (x - mean);
    }
    const double var = s.replicas > 1 ? m2 / static_cast<double>(s.replicas - 1) : 0.0;
    cols.push_back({{"column", c}, {"mean", mean}, {"variance", var}});
  }
  return {{"replicas", s.replicas}, {"width", s.width}, {"seed", s.seed}, {"sampler", s.sampler_id}, {"columns", cols}};
}

std::string paths_csv(const PathSample& p) {
  std::ostringstream os;
  os << "replica";
  const std::size_t d = p.points.empty() ? 0 : p.points.front().size();
  for (std::size_t s = 1; s <= d; ++s) os << ",t" << s;
  os << ",value\n";
  for (std::size_t r = 0; r < p.sample.replicas; ++r) {
    for (std::size_t c = 0; c < p.points.size(); ++c) {
      os << r;
      for (double t : p.points[c]) os << ',' << num(t);
      os << ',' << num(p.sample.at(r, c)) << '\n';
    }
  }
  return os.str();
}

std::string sample_csv(const EmpiricalSample& s) {
  std::ostringstream os;
  os << "replica,column,value\n";
  for (std::size_t r = 0; r < s.replicas; ++r)
    for (std::size_t c = 0; c < s.width; ++c) os << r << ',' << c << ',' << num(s.at(r, c)) << '\n';
  return os.str();
}

std::string tail_csv(const TailReport& r) {
  std::ostringstream os;
  os << "x,frequency,kappa_needed,bound\n";
  for (const auto& t : r.rows)
    os << num(t.x) << ',' << num(t.frequency) << ',' << num(t.kappa_needed) << ',' << num(t.bound) << '\n';
  return os.str();
}

std::string holder_csv(const HolderReport& r) {
  std::ostringstream os;
  os << "s,t,distance,epsilon,frequency,k_needed\n";
  for (const auto& x : r.rows) {
    os << x.first << ',' << x.second << ',' << num(x.distance) << ',' << num(x.epsilon) << ',' << num(x.frequency)
       << ',' << num(x.k_needed) << '\n';
  }
  return os.str();
}

std::string covering_csv(const CoveringReport& r) {
  std::ostringstream os;
  os << "epsilon,upper,lower,entropy,vw_envelope\n";
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    os << num(r.epsilons[k]) << ',' << r.upper[k] << ',' << r.lower[k] << ',' << num(r.entropy[k]) << ','
       << num(r.vw_envelope[k]) << '\n';
  }
  return os.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace orthodec
