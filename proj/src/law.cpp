#include "orthodec/law.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "orthodec/error.hpp"

namespace orthodec {

InnovationLaw InnovationLaw::rademacher() {
  InnovationLaw law;
  law.kind_ = Kind::rademacher;
  law.variance_ = 1.0;
  law.points_ = {-1.0, 1.0};
  law.probs_ = {0.5, 0.5};
  law.cdf_ = {0.5, 1.0};
  return law;
}

InnovationLaw InnovationLaw::gaussian(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InputError("gaussian innovation variance must be positive and finite");
  }
  InnovationLaw law;
  law.kind_ = Kind::gaussian;
  law.variance_ = variance;
  return law;
}

InnovationLaw InnovationLaw::custom(std::vector<double> points, std::vector<double> probs,
                                    double max_finite_moment) {
  if (points.empty() || points.size() != probs.size()) {
    throw InputError("custom law needs matching, non-empty support and weights");
  }
  double total = 0.0;
  for (double w : probs) {
    if (!(w >= 0.0)) throw InputError("custom law weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("custom law weights must sum to 1");
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!std::isfinite(points[k])) throw InputError("custom law support must be finite");
    mean += probs[k] * points[k];
    second += probs[k] * points[k] * points[k];
  }
  if (std::abs(mean) > 1e-12) throw InputError("innovation law must be centered (mean zero)");
  if (!(second > 0.0)) throw InputError("innovation law must have positive variance");
  if (!(max_finite_moment >= 2.0)) {
    throw InputError("innovations must be square integrable");
  }
  InnovationLaw law;
  law.kind_ = Kind::custom;
  law.variance_ = second;
  law.points_ = std::move(points);
  law.probs_ = std::move(probs);
  law.cdf_.resize(law.probs_.size());
  std::partial_sum(law.probs_.begin(), law.probs_.end(), law.cdf_.begin());
  law.cdf_.back() = 1.0;
  law.max_moment_ = max_finite_moment;
  return law;
}

double InnovationLaw::stddev() const { return std::sqrt(variance_); }

std::optional<double> InnovationLaw::abs_moment(double p) const {
  if (!(p > 0.0)) throw InputError("moment order must be positive");
  switch (kind_) {
    case Kind::rademacher:
      return 1.0;
    case Kind::gaussian:
      // σ^p 2^{p/2} Γ((p+1)/2) / √π
      return std::pow(variance_, p / 2.0) * std::exp((p / 2.0) * std::numbers::ln2 +
                                                     std::lgamma((p + 1.0) / 2.0)) /
             std::sqrt(std::numbers::pi);
    case Kind::custom: {
      if (p > max_moment_) return std::nullopt;
      double m = 0.0;
      for (std::size_t k = 0; k < points_.size(); ++k) m += probs_[k] * std::pow(std::abs(points_[k]), p);
      return m;
    }
  }
  return std::nullopt;
}

double InnovationLaw::sup_norm() const {
  if (kind_ == Kind::gaussian) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t k = 0; k < points_.size(); ++k)
    if (probs_[k] > 0.0) m = std::max(m, std::abs(points_[k]));
  return m;
}

std::string InnovationLaw::sampler_id() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::rademacher:
      return "philox4x32-10/rademacher";
    case Kind::gaussian:
      os << "philox4x32-10/gaussian(var=" << variance_ << ")";
      return os.str();
    case Kind::custom:
      os << "philox4x32-10/discrete(" << points_.size() << " atoms)";
      return os.str();
  }
  return "unknown";
}

double InnovationLaw::draw(const Philox4x32::Counter& bits) const {
  switch (kind_) {
    case Kind::rademacher:
      return (bits[0] & 1u) ? 1.0 : -1.0;
    case Kind::gaussian: {
      const double u1 = open_unit(bits[0], bits[1]);
      const double u2 = open_unit(bits[2], bits[3]);
      return std::sqrt(variance_) * std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * std::numbers::pi * u2);
    }
    case Kind::custom: {
      const double u = open_unit(bits[0], bits[1]);
      const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), points_.size() - 1);
      return points_[k];
    }
  }
  return 0.0;
}

}  // namespace orthodec
