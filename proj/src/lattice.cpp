#include "orthodec/lattice.hpp"

#include <algorithm>
#include <sstream>

#include "orthodec/error.hpp"

namespace orthodec {

MultiIndex MultiIndex::unit(std::size_t d, std::size_t axis) {
  if (axis < 1 || axis > d) {
    throw InputError("axis " + std::to_string(axis) + " outside 1.." + std::to_string(d));
  }
  MultiIndex e = zero(d);
  e[axis - 1] = 1;
  return e;
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& other) {
  require_same_dim(*this, other);
  for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] += other.coords_[k];
  return *this;
}

MultiIndex& MultiIndex::operator-=(const MultiIndex& other) {
  require_same_dim(*this, other);
  for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] -= other.coords_[k];
  return *this;
}

MultiIndex MultiIndex::operator-() const {
  MultiIndex out = *this;
  for (auto& c : out.coords_) c = -c;
  return out;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (k) os << ',';
    os << coords_[k];
  }
  os << ')';
  return os.str();
}

void require_same_dim(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) {
    throw InputError("dimension mismatch: " + a.to_string() + " vs " + b.to_string());
  }
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
  require_same_dim(a, b);
  for (std::size_t k = 0; k < a.dim(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

bool lt(const MultiIndex& a, const MultiIndex& b) {
  require_same_dim(a, b);
  for (std::size_t k = 0; k < a.dim(); ++k)
    if (a[k] >= b[k]) return false;
  return true;
}

bool geq(const MultiIndex& a, const MultiIndex& b) { return leq(b, a); }
bool gt(const MultiIndex& a, const MultiIndex& b) { return lt(b, a); }

MultiIndex meet(const MultiIndex& a, const MultiIndex& b) {
  require_same_dim(a, b);
  MultiIndex out = a;
  for (std::size_t k = 0; k < a.dim(); ++k) out[k] = std::min(a[k], b[k]);
  return out;
}

MultiIndex join(const MultiIndex& a, const MultiIndex& b) {
  require_same_dim(a, b);
  MultiIndex out = a;
  for (std::size_t k = 0; k < a.dim(); ++k) out[k] = std::max(a[k], b[k]);
  return out;
}

bool region_contains(const HalfSpaceRegion& r, const MultiIndex& i) {
  if (r.axis < 1 || r.axis > i.dim()) {
    throw InputError("half-space axis " + std::to_string(r.axis) + " outside 1.." +
                     std::to_string(i.dim()));
  }
  return i[r.axis - 1] >= r.level;
}

Rect::Rect(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.empty()) {
    throw InputError("rectangle corners must share a positive dimension");
  }
  for (std::size_t s = 0; s < lower_.size(); ++s) {
    if (!(lower_[s] >= 0.0 && upper_[s] <= 1.0 && lower_[s] <= upper_[s])) {
      throw InputError("rectangle must satisfy 0 <= lower <= upper <= 1 on every axis");
    }
  }
}

Rect Rect::quadrant(std::vector<double> t) {
  std::vector<double> zero(t.size(), 0.0);
  return Rect(std::move(zero), std::move(t));
}

Rect Rect::unit(std::size_t d) { return quadrant(std::vector<double>(d, 1.0)); }

double Rect::volume() const {
  double v = 1.0;
  for (std::size_t s = 0; s < lower_.size(); ++s) v *= upper_[s] - lower_[s];
  return v;
}

bool Rect::contains(const std::vector<double>& point) const {
  if (point.size() != dim()) throw InputError("point dimension does not match rectangle");
  for (std::size_t s = 0; s < point.size(); ++s)
    if (point[s] < lower_[s] || point[s] > upper_[s]) return false;
  return true;
}

double intersection_volume(const Rect& a, const Rect& b) {
  if (a.dim() != b.dim()) throw InputError("rectangle dimension mismatch");
  double v = 1.0;
  for (std::size_t s = 0; s < a.dim(); ++s) {
    const double lo = std::max(a.lower()[s], b.lower()[s]);
    const double hi = std::min(a.upper()[s], b.upper()[s]);
    if (hi <= lo) return 0.0;
    v *= hi - lo;
  }
  return v;
}

double cube_overlap_weight(std::int64_t n, const Rect& a, const MultiIndex& i) {
  if (n < 1) throw InputError("n must be positive");
  if (i.dim() != a.dim()) throw InputError("index and rectangle dimensions differ");
  double w = 1.0;
  for (std::size_t s = 0; s < i.dim(); ++s) {
    if (i[s] < 1 || i[s] > n) {
      throw InputError("index " + i.to_string() + " outside <" + std::to_string(n) + ">^d");
    }
    const double nn = static_cast<double>(n);
    w *= interval_overlap(nn * a.lower()[s], nn * a.upper()[s], i[s]);
    if (w == 0.0) return 0.0;
  }
  return w;
}

}  // namespace orthodec
