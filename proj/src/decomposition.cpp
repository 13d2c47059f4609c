#include "orthodec/decomposition.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "orthodec/error.hpp"

namespace orthodec {

namespace {

SigmaAlgebraSpec past_at(const MultiIndex& base) { return SigmaAlgebraSpec::shifted_past(base); }

/// E[X | T^{base + e_S} M] for the axes in `mask`.
ChaosElement project_past(const ChaosElement& x, const MultiIndex& base, AxisMask mask) {
  MultiIndex shift = base;
  for (std::size_t s = 1; s <= x.dim(); ++s)
    if (mask_has(mask, s)) shift[s - 1] += 1;
  return project(x, past_at(shift));
}

/// Σ_{S ⊆ mask} (-1)^{|S|} E[X | T^{base + e_S} M]: removes the components of
/// X that are measurable with respect to T_s M for any s in mask.
ChaosElement inclusion_exclusion(const ChaosElement& x, const MultiIndex& base, AxisMask mask) {
  ChaosElement out(x.dim());
  for (AxisMask sub = mask;; sub = (sub - 1) & mask) {
    const double sign = (std::popcount(sub) % 2 == 0) ? 1.0 : -1.0;
    out += sign * project_past(x, base, sub);
    if (sub == 0) break;
  }
  return out;
}

void require_past_measurable(const ChaosElement& f, const MultiIndex& base, const char* who) {
  const auto bad = f.offending_indices(base);
  if (bad.empty()) return;
  std::ostringstream os;
  os << who << ": element is not measurable with respect to T^" << base.to_string()
     << "M; offending indices:";
  for (std::size_t k = 0; k < bad.size() && k < 16; ++k) os << ' ' << bad[k].to_string();
  if (bad.size() > 16) os << " ... (" << bad.size() << " total)";
  throw InputError(os.str());
}

void recurse(const ChaosElement& f, const std::vector<std::size_t>& axes, const MultiIndex& base,
             AxisMask prefix, std::map<AxisMask, ChaosElement>& out) {
  const std::size_t d = f.dim();
  auto& slot = out.try_emplace(prefix, ChaosElement(d)).first->second;
  if (axes.empty()) {
    slot += f;
    return;
  }
  const std::size_t r = axes.size();
  // Successive martingale parts along the last axis down to the first.
  std::vector<ChaosElement> transfer(r, ChaosElement(d));
  ChaosElement rest = f;
  for (std::size_t i = r; i-- > 0;) {
    VolnyStep step = volny_step(rest, axes[i], base);
    transfer[i] = std::move(step.transfer);
    rest = std::move(step.martingale);
  }
  AxisMask later = 0;
  for (std::size_t i = 1; i < r; ++i) later |= axis_bit(axes[i]);
  slot += inclusion_exclusion(rest, base, later);

  for (std::size_t i = 0; i < r; ++i) {
    AxisMask after = 0;
    for (std::size_t k = i + 1; k < r; ++k) after |= axis_bit(axes[k]);
    ChaosElement corrected = inclusion_exclusion(transfer[i], base, after);
    if (corrected.empty()) continue;
    std::vector<std::size_t> remaining(axes.begin(), axes.begin() + static_cast<std::ptrdiff_t>(i));
    recurse(corrected, remaining, base + MultiIndex::unit(d, axes[i]), prefix | axis_bit(axes[i]), out);
  }
}

Decomposition from_terms(std::size_t d, std::map<AxisMask, ChaosElement> terms) {
  Decomposition dec(d);
  for (auto& [mask, value] : terms) dec.set_term(mask, std::move(value));
  return dec;
}

}  // namespace

Decomposition::Decomposition(std::size_t d) : dim(d), m(d), corner(d) {
  if (d == 0 || d > 30) throw InputError("dimension must lie in 1..30");
}

ChaosElement Decomposition::term(AxisMask mask) const {
  if (mask == 0) return m;
  if (mask == full_mask(dim)) return corner;
  const auto it = boundary_terms.find(mask);
  return it == boundary_terms.end() ? ChaosElement(dim) : it->second;
}

void Decomposition::set_term(AxisMask mask, ChaosElement value) {
  if (value.dim() != dim) throw InputError("decomposition term dimension mismatch");
  if (mask > full_mask(dim)) throw InputError("axis mask outside <d>");
  if (mask == 0) {
    m = std::move(value);
  } else if (mask == full_mask(dim)) {
    corner = std::move(value);
  } else if (value.empty()) {
    boundary_terms.erase(mask);
  } else {
    boundary_terms[mask] = std::move(value);
  }
}

VolnyStep volny_step(const ChaosElement& f, std::size_t axis, const MultiIndex& base) {
  const std::size_t d = f.dim();
  if (base.dim() != d) throw InputError("volny_step: base dimension mismatch");
  if (axis < 1 || axis > d) throw InputError("volny_step: axis outside 1..d");
  require_past_measurable(f, base, "volny_step");
  VolnyStep out{ChaosElement(d), ChaosElement(d)};
  if (f.empty()) return out;
  const MultiIndex e = MultiIndex::unit(d, axis);
  const SigmaAlgebraSpec outer = past_at(base);
  const SigmaAlgebraSpec inner = past_at(base + e);
  const std::int64_t extent = f.max_coord(axis) - base[axis - 1];
  MultiIndex lag = MultiIndex::zero(d);
  for (std::int64_t k = 0; k <= extent; ++k) {
    lag[axis - 1] = k;
    const ChaosElement shifted = shift(f, lag);
    const ChaosElement coarse = project(shifted, inner);
    out.martingale += project(shifted, outer);
    out.martingale -= coarse;
    out.transfer += coarse;
  }
  return out;
}

ChaosElement apply_difference_operator(const ChaosElement& h, AxisMask mask) {
  const std::size_t d = h.dim();
  ChaosElement out(d);
  for (AxisMask sub = mask;; sub = (sub - 1) & mask) {
    MultiIndex lag = MultiIndex::zero(d);
    for (std::size_t s = 1; s <= d; ++s)
      if (mask_has(sub, s)) lag[s - 1] = 1;
    const double sign = (std::popcount(sub) % 2 == 0) ? 1.0 : -1.0;
    out += sign * shift(h, lag);
    if (sub == 0) break;
  }
  return out;
}

Decomposition decompose_generic(const ChaosElement& f) {
  const std::size_t d = f.dim();
  require_past_measurable(f, MultiIndex::zero(d), "decompose");
  std::vector<std::size_t> axes(d);
  for (std::size_t s = 0; s < d; ++s) axes[s] = s + 1;
  std::map<AxisMask, ChaosElement> terms;
  recurse(f, axes, MultiIndex::zero(d), 0, terms);
  return from_terms(d, std::move(terms));
}

Decomposition decompose_explicit_d2(const ChaosElement& f) {
  if (f.dim() != 2) throw InputError("explicit d=2 chain needs a two-dimensional element");
  const MultiIndex o = MultiIndex::zero(2);
  const MultiIndex e2 = MultiIndex::unit(2, 2);
  require_past_measurable(f, o, "decompose");

  // f = m_2 + (I-U_2) g_2, then m_2 = m_1 + (I-U_1) g_1.
  auto [m2, g2] = volny_step(f, 2, o);
  auto [m1, g1] = volny_step(m2, 1, o);
  // m := m_1 - E[m_1 | T_2 M]; the same correction moves onto g_1.
  ChaosElement m = m1 - project(m1, past_at(e2));
  ChaosElement mj1 = g1 - project(g1, past_at(e2));
  // g_2 = m̄_1 + (I-U_1) ḡ_1.
  auto [mbar1, gbar1] = volny_step(g2, 1, e2);

  Decomposition dec(2);
  dec.m = std::move(m);
  dec.set_term(0b01, std::move(mj1));
  dec.set_term(0b10, std::move(mbar1));
  dec.corner = std::move(gbar1);
  return dec;
}

Decomposition decompose_explicit_d3(const ChaosElement& f) {
  if (f.dim() != 3) throw InputError("explicit d=3 chain needs a three-dimensional element");
  const MultiIndex o = MultiIndex::zero(3);
  const MultiIndex e1 = MultiIndex::unit(3, 1);
  const MultiIndex e2 = MultiIndex::unit(3, 2);
  const MultiIndex e3 = MultiIndex::unit(3, 3);
  require_past_measurable(f, o, "decompose");
  auto cond = [](const ChaosElement& x, const MultiIndex& shift) { return project(x, past_at(shift)); };

  // f = m_3 + (I-U_3) g_3,  m_3 = m_2 + (I-U_2) g_2,  m_2 = m_1 + (I-U_1) g_1.
  auto [m3, g3] = volny_step(f, 3, o);
  auto [m2, g2] = volny_step(m3, 2, o);
  auto [m1, g1] = volny_step(m2, 1, o);

  ChaosElement m = m1 - cond(m1, e2) - cond(m1, e3) + cond(m1, e2 + e3);
  ChaosElement mj1 = g1 - cond(g1, e2) - cond(g1, e3) + cond(g1, e2 + e3);

  // g_3 = m̄_1 + (I-U_1) ḡ_1,  m̄_1 = m̄_2 + (I-U_2) ḡ_2,  m̄ = m̄_2 - E[m̄_2 | T_1 T_3 M].
  auto [mbar1, gbar1] = volny_step(g3, 1, e3);
  auto [mbar2, gbar2] = volny_step(mbar1, 2, e3);
  ChaosElement mj3 = mbar2 - cond(mbar2, e1 + e3);
  ChaosElement mj23 = gbar2 - cond(gbar2, e1);
  // ḡ_1 = m̿_2 + (I-U_2) g̿_2.
  auto [mbb2, gbb2] = volny_step(gbar1, 2, e1 + e3);

  // g_2 = m̿_1 + (I-U_1) g̿_1,  m̿ = m̿_1 - E[m̿_1 | T_3 M].
  auto [mbb1, gbb1] = volny_step(g2, 1, e2);
  ChaosElement mj2 = mbb1 - cond(mbb1, e3);
  ChaosElement mj12 = gbb1 - cond(gbb1, e3);

  Decomposition dec(3);
  dec.m = std::move(m);
  dec.set_term(0b001, std::move(mj1));
  dec.set_term(0b010, std::move(mj2));
  dec.set_term(0b100, std::move(mj3));
  dec.set_term(0b011, std::move(mj12));
  dec.set_term(0b101, std::move(mbb2));
  dec.set_term(0b110, std::move(mj23));
  dec.corner = std::move(gbb2);
  return dec;
}

Decomposition decompose(const ChaosElement& f) {
  switch (f.dim()) {
    case 1: {
      require_past_measurable(f, MultiIndex::zero(1), "decompose");
      auto [m, g] = volny_step(f, 1, MultiIndex::zero(1));
      Decomposition dec(1);
      dec.m = std::move(m);
      dec.corner = std::move(g);
      return dec;
    }
    case 2:
      return decompose_explicit_d2(f);
    case 3:
      return decompose_explicit_d3(f);
    default:
      return decompose_generic(f);
  }
}

ChaosElement reconstruct(const Decomposition& dec) {
  ChaosElement out = dec.m;
  for (const auto& [mask, h] : dec.boundary_terms) out += apply_difference_operator(h, mask);
  out += apply_difference_operator(dec.corner, full_mask(dec.dim));
  return out;
}

OmdReport omd_verify(const Decomposition& dec) {
  const std::size_t d = dec.dim;
  OmdReport report;
  const InnovationLaw unit = InnovationLaw::rademacher();
  auto check = [&](AxisMask mask, const ChaosElement& h) {
    for (std::size_t s = 1; s <= d; ++s) {
      if (mask_has(mask, s)) continue;
      const double r = l2_norm(project(h, past_at(MultiIndex::unit(d, s))), unit);
      report.residuals.push_back({mask, s, r});
      if (r != 0.0) report.pass = false;
    }
  };
  check(0, dec.m);
  for (const auto& [mask, h] : dec.boundary_terms) check(mask, h);
  return report;
}

// ---------------------------------------------------------------------------

namespace {

SigmaAlgebraSpec series_algebra(std::size_t d, std::size_t axis, std::int64_t k,
                                SigmaAlgebraSpec::Kind kind) {
  if (kind == SigmaAlgebraSpec::Kind::half_space) return SigmaAlgebraSpec::half_space(d, axis, k);
  MultiIndex shift = MultiIndex::zero(d);
  shift[axis - 1] = k;
  return SigmaAlgebraSpec::shifted_past(shift);
}

double weight_of(std::int64_t k, std::size_t d) {
  return std::pow(static_cast<double>(k), static_cast<double>(d) - 1.0);  // pow(0, 0) == 1
}

void finish(SeriesReport& report) {
  double acc = 0.0;
  report.partial_sums.clear();
  for (const auto& t : report.terms) {
    acc += t.weight * t.norm;
    report.partial_sums.push_back(acc);
  }
  report.total = acc;
  report.infinite = !std::isfinite(acc);
  if (report.infinite) {
    report.converged = false;
    report.inconclusive = true;
  }
}

}  // namespace

SeriesReport series_condition(const ChaosElement& f, std::size_t axis, double p,
                              const InnovationLaw& law, SigmaAlgebraSpec::Kind algebra,
                              const SeriesOptions& options) {
  const std::size_t d = f.dim();
  if (axis < 1 || axis > d) throw InputError("series_condition: axis outside 1..d");
  if (!(p >= 1.0)) throw InputError("series_condition: p must be at least 1");
  require_past_measurable(f, MultiIndex::zero(d), "series_condition");
  SeriesReport report;
  report.axis = axis;
  report.p = p;
  report.algebra = algebra;
  report.tail_tolerance = options.tail_tolerance;
  report.exact = (p == 2.0);
  const std::int64_t first = d == 1 ? 0 : 1;
  std::int64_t k = first;
  for (; k <= options.cap; ++k) {
    const ChaosElement proj = project(f, series_algebra(d, axis, k, algebra));
    if (proj.empty()) {
      report.converged = true;
      break;
    }
    SeriesTerm term;
    term.k = k;
    term.weight = weight_of(k, d);
    if (p == 2.0) {
      term.norm = l2_norm(proj, law);
    } else {
      const LpEstimate est = lp_norm_estimate(proj, law, p, options.replicas,
                                              options.seed + static_cast<std::uint64_t>(k), false);
      term.norm = est.estimate;
      term.std_error = est.std_error;
    }
    report.terms.push_back(term);
  }
  report.truncation = k;
  if (!report.converged) report.inconclusive = true;
  finish(report);
  return report;
}

ChaosElement materialize(std::size_t d, std::int64_t extent,
                         const std::function<double(const MultiIndex&)>& generator) {
  if (extent < 0) throw InputError("materialize: extent must be non-negative");
  ChaosElement out(d);
  MultiIndex j = MultiIndex::zero(d);
  while (true) {
    out.add(j, generator(j));
    std::size_t s = 0;
    for (; s < d; ++s) {
      if (++j[s] <= extent) break;
      j[s] = 0;
    }
    if (s == d) break;
  }
  return out;
}

SeriesReport series_condition_generated(std::size_t d,
                                        const std::function<double(const MultiIndex&)>& generator,
                                        std::size_t axis, double p, const InnovationLaw& law,
                                        SigmaAlgebraSpec::Kind algebra,
                                        const SeriesOptions& options) {
  const ChaosElement truncated = materialize(d, options.cap, generator);
  SeriesReport report = series_condition(truncated, axis, p, law, algebra, options);
  // The truncated input always terminates; what decides convergence is the
  // size of the last retained term.
  const double last = report.terms.empty() ? 0.0 : report.terms.back().norm * report.terms.back().weight;
  const bool reached_edge = !report.terms.empty() && report.terms.back().k == options.cap;
  report.truncation = options.cap;
  report.converged = !reached_edge || last < options.tail_tolerance;
  report.inconclusive = !report.converged;
  if (report.infinite) report.converged = false;
  return report;
}

LinearConditionReport linear_condition(const ChaosElement& a, std::size_t axis, double p,
                                       const InnovationLaw& law, const SeriesOptions& options) {
  const std::size_t d = a.dim();
  if (axis < 1 || axis > d) throw InputError("linear_condition: axis outside 1..d");
  if (!(p >= 2.0)) throw InputError("linear_condition: p must be at least 2");
  require_past_measurable(a, MultiIndex::zero(d), "linear_condition");
  for (const auto& [j, c] : a.coeffs())
    if (!std::isfinite(c)) throw InputError("linear_condition: non-finite coefficient at " + j.to_string());

  LinearConditionReport out;
  out.l2.axis = out.rosenthal.axis = axis;
  out.l2.p = 2.0;
  out.rosenthal.p = p;
  out.l2.algebra = out.rosenthal.algebra = SigmaAlgebraSpec::Kind::half_space;
  out.l2.tail_tolerance = out.rosenthal.tail_tolerance = options.tail_tolerance;
  out.has_rosenthal = p > 2.0;

  const SeriesReport half = series_condition(a, axis, 2.0, law, SigmaAlgebraSpec::Kind::half_space, options);

  const std::int64_t first = d == 1 ? 0 : 1;
  std::int64_t k = first;
  for (; k <= options.cap; ++k) {
    double sq = 0.0;
    double pw = 0.0;
    bool any = false;
    for (const auto& [j, c] : a.coeffs()) {
      if (j[axis - 1] < k) continue;
      any = true;
      sq += c * c;
      pw += std::pow(std::abs(c), p);
    }
    if (!any) {
      out.l2.converged = out.rosenthal.converged = true;
      break;
    }
    const double w = weight_of(k, d);
    out.l2.terms.push_back({k, w, std::sqrt(sq), 0.0});
    if (out.has_rosenthal) out.rosenthal.terms.push_back({k, w, std::sqrt(sq) + std::pow(pw, 1.0 / p), 0.0});
  }
  out.l2.truncation = out.rosenthal.truncation = k;
  out.l2.inconclusive = !out.l2.converged;
  out.rosenthal.inconclusive = !out.rosenthal.converged;
  finish(out.l2);
  if (out.has_rosenthal) finish(out.rosenthal);

  if (half.terms.size() != out.l2.terms.size()) {
    out.half_space_matches = false;
  } else {
    for (std::size_t t = 0; t < half.terms.size(); ++t) {
      const double expected = law.stddev() * out.l2.terms[t].norm;
      const double err = std::abs(half.terms[t].norm - expected);
      out.max_match_error = std::max(out.max_match_error, err);
      if (err > 1e-12 * std::max(1.0, expected)) out.half_space_matches = false;
    }
  }
  return out;
}

}  // namespace orthodec
