#include "orthodec/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "orthodec/error.hpp"

namespace orthodec {

ChaosElement::ChaosElement(std::size_t d) : dim_(d) {
  if (d == 0) throw InputError("dimension must be at least 1");
}

ChaosElement::ChaosElement(std::size_t d,
                           std::initializer_list<std::pair<MultiIndex, double>> terms)
    : ChaosElement(d) {
  for (const auto& [j, c] : terms) add(j, c);
}

ChaosElement ChaosElement::innovation(const MultiIndex& j, double c) {
  ChaosElement f(j.dim());
  f.add(j, c);
  return f;
}

void ChaosElement::require_dim(const MultiIndex& j) const {
  if (j.dim() != dim_) {
    throw InputError("index " + j.to_string() + " does not have dimension " + std::to_string(dim_));
  }
}

double ChaosElement::coeff(const MultiIndex& j) const {
  const auto it = coeffs_.find(j);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void ChaosElement::add(const MultiIndex& j, double c) {
  require_dim(j);
  if (c == 0.0) return;
  auto [it, inserted] = coeffs_.try_emplace(j, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) coeffs_.erase(it);
  }
}

void ChaosElement::set(const MultiIndex& j, double c) {
  require_dim(j);
  if (c == 0.0) {
    coeffs_.erase(j);
  } else {
    coeffs_[j] = c;
  }
}

bool ChaosElement::is_measurable(const MultiIndex& base) const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [&](const auto& kv) { return geq(kv.first, base); });
}

std::vector<MultiIndex> ChaosElement::offending_indices(const MultiIndex& base) const {
  std::vector<MultiIndex> out;
  for (const auto& [j, c] : coeffs_)
    if (!geq(j, base)) out.push_back(j);
  return out;
}

double ChaosElement::coeff_sum() const {
  double s = 0.0;
  for (const auto& [j, c] : coeffs_) s += c;
  return s;
}

double ChaosElement::coeff_sum_squares() const {
  double s = 0.0;
  for (const auto& [j, c] : coeffs_) s += c * c;
  return s;
}

double ChaosElement::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [j, c] : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

std::int64_t ChaosElement::max_coord(std::size_t axis) const {
  if (coeffs_.empty()) throw InputError("empty element has no support");
  std::int64_t m = coeffs_.begin()->first[axis - 1];
  for (const auto& [j, c] : coeffs_) m = std::max(m, j[axis - 1]);
  return m;
}

std::int64_t ChaosElement::min_coord(std::size_t axis) const {
  if (coeffs_.empty()) throw InputError("empty element has no support");
  std::int64_t m = coeffs_.begin()->first[axis - 1];
  for (const auto& [j, c] : coeffs_) m = std::min(m, j[axis - 1]);
  return m;
}

ChaosElement& ChaosElement::operator+=(const ChaosElement& other) {
  if (other.dim_ != dim_) throw InputError("chaos element dimension mismatch");
  for (const auto& [j, c] : other.coeffs_) add(j, c);
  return *this;
}

ChaosElement& ChaosElement::operator-=(const ChaosElement& other) {
  if (other.dim_ != dim_) throw InputError("chaos element dimension mismatch");
  for (const auto& [j, c] : other.coeffs_) add(j, -c);
  return *this;
}

ChaosElement& ChaosElement::operator*=(double a) {
  if (a == 0.0) {
    coeffs_.clear();
    return *this;
  }
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it->second *= a;
    it = it->second == 0.0 ? coeffs_.erase(it) : std::next(it);
  }
  return *this;
}

SigmaAlgebraSpec SigmaAlgebraSpec::shifted_past(MultiIndex shift) {
  if (shift.dim() == 0) throw InputError("dimension must be at least 1");
  SigmaAlgebraSpec g;
  g.kind_ = Kind::shifted_past;
  g.dim_ = shift.dim();
  g.shift_ = std::move(shift);
  return g;
}

SigmaAlgebraSpec SigmaAlgebraSpec::half_space(std::size_t d, std::size_t axis, std::int64_t level) {
  if (axis < 1 || axis > d) {
    throw InputError("half-space axis " + std::to_string(axis) + " outside 1.." + std::to_string(d));
  }
  SigmaAlgebraSpec g;
  g.kind_ = Kind::half_space;
  g.dim_ = d;
  g.axis_ = axis;
  g.level_ = level;
  return g;
}

bool SigmaAlgebraSpec::keeps(const MultiIndex& l) const {
  if (kind_ == Kind::shifted_past) return geq(l, shift_);
  return region_contains(HalfSpaceRegion{axis_, level_}, l);
}

ChaosElement shift(const ChaosElement& f, const MultiIndex& j) {
  if (j.dim() != f.dim()) throw InputError("shift dimension mismatch");
  ChaosElement out(f.dim());
  for (const auto& [l, c] : f.coeffs()) out.set(l - j, c);
  return out;
}

ChaosElement project(const ChaosElement& f, const SigmaAlgebraSpec& g) {
  if (g.dim() != f.dim()) throw InputError("projection dimension mismatch");
  ChaosElement out(f.dim());
  for (const auto& [l, c] : f.coeffs())
    if (g.keeps(l)) out.set(l, c);
  return out;
}

ChaosElement combine(double a, const ChaosElement& f, double b, const ChaosElement& g) {
  if (f.dim() != g.dim()) throw InputError("combine dimension mismatch");
  ChaosElement out(f.dim());
  for (const auto& [l, c] : f.coeffs()) out.add(l, a * c);
  for (const auto& [l, c] : g.coeffs()) out.add(l, b * c);
  return out;
}

double l2_norm(const ChaosElement& f, const InnovationLaw& law) {
  return law.stddev() * std::sqrt(f.coeff_sum_squares());
}

double evaluate(const ChaosElement& f, const InnovationField& field, const MultiIndex& k) {
  double v = 0.0;
  for (const auto& [j, c] : f.coeffs()) v += c * field.at(k - j);
  return v;
}

LpEstimate lp_norm_estimate(const ChaosElement& f, const InnovationLaw& law, double p,
                            std::size_t replicas, std::uint64_t seed, bool with_bracket) {
  if (!(p >= 1.0)) throw InputError("p must be at least 1");
  LpEstimate est;
  est.p = p;
  est.seed = seed;
  est.replicas = replicas;
  if (with_bracket) {
    const auto moment = law.abs_moment(p);
    if (!moment) {
      throw NotIntegrableError("innovation law " + law.sampler_id() + " has no moment of order " +
                               std::to_string(p));
    }
    est.has_bracket = true;
    est.rosenthal_quadratic = std::pow(f.coeff_sum_squares() * law.variance(), p / 2.0);
    double s = 0.0;
    for (const auto& [j, c] : f.coeffs()) s += std::pow(std::abs(c), p);
    est.rosenthal_moment = s * *moment;
  }
  if (p == 2.0) {
    est.exact = true;
    est.estimate = l2_norm(f, law);
    est.ci_low = est.ci_high = est.estimate;
    return est;
  }
  if (replicas < 100) throw InputError("lp_norm_estimate needs at least 100 replicas");
  if (!law.abs_moment(p)) {
    throw NotIntegrableError("innovation law " + law.sampler_id() + " has no moment of order " +
                             std::to_string(p));
  }
  const MultiIndex origin = MultiIndex::zero(f.dim());
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t r = 0; r < replicas; ++r) {
    const InnovationField field(law, seed, r);
    const double x = std::pow(std::abs(evaluate(f, field, origin)), p);
    const double delta = x - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (x - mean);
  }
  const double n = static_cast<double>(replicas);
  const double se_mean = std::sqrt(m2 / (n - 1.0) / n);
  est.estimate = std::pow(mean, 1.0 / p);
  est.std_error = mean > 0.0 ? est.estimate / (p * mean) * se_mean : 0.0;
  est.ci_low = std::pow(std::max(0.0, mean - 1.96 * se_mean), 1.0 / p);
  est.ci_high = std::pow(mean + 1.96 * se_mean, 1.0 / p);
  return est;
}

}  // namespace orthodec
