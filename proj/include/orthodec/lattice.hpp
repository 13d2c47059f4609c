#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace orthodec {

// Axes are numbered 1..d in every public signature of the library. Grid
// indices of a box <n>^d run 1..n.

/// A point of Z^d. The dimension is a runtime quantity.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<std::int64_t> coords) : coords_(coords) {}
  explicit MultiIndex(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}

  static MultiIndex zero(std::size_t d) { return MultiIndex(std::vector<std::int64_t>(d, 0)); }
  /// e_axis, axis in 1..d.
  static MultiIndex unit(std::size_t d, std::size_t axis);
  static MultiIndex filled(std::size_t d, std::int64_t value) {
    return MultiIndex(std::vector<std::int64_t>(d, value));
  }

  std::size_t dim() const { return coords_.size(); }
  std::int64_t operator[](std::size_t k) const { return coords_[k]; }
  std::int64_t& operator[](std::size_t k) { return coords_[k]; }
  const std::vector<std::int64_t>& coords() const { return coords_; }

  /// Lexicographic order; used for canonical storage, not the lattice order.
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  MultiIndex& operator+=(const MultiIndex& other);
  MultiIndex& operator-=(const MultiIndex& other);
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
  friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) { return a -= b; }
  MultiIndex operator-() const;

  std::string to_string() const;

 private:
  std::vector<std::int64_t> coords_;
};

void require_same_dim(const MultiIndex& a, const MultiIndex& b);

/// a ⪯ b componentwise.
bool leq(const MultiIndex& a, const MultiIndex& b);
/// a ≺ b: strict in every coordinate.
bool lt(const MultiIndex& a, const MultiIndex& b);
bool geq(const MultiIndex& a, const MultiIndex& b);
bool gt(const MultiIndex& a, const MultiIndex& b);
/// Componentwise minimum a ∧ b.
MultiIndex meet(const MultiIndex& a, const MultiIndex& b);
/// Componentwise maximum.
MultiIndex join(const MultiIndex& a, const MultiIndex& b);

/// Λ_{level,axis} = {i : i_axis >= level}.
struct HalfSpaceRegion {
  std::size_t axis = 1;
  std::int64_t level = 0;
};

bool region_contains(const HalfSpaceRegion& r, const MultiIndex& i);

/// Axis-aligned closed rectangle [lower, upper] inside [0,1]^d.
class Rect {
 public:
  Rect() = default;
  Rect(std::vector<double> lower, std::vector<double> upper);
  /// Quadrant [0, t].
  static Rect quadrant(std::vector<double> t);
  static Rect unit(std::size_t d);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double volume() const;
  bool contains(const std::vector<double>& point) const;

  friend bool operator==(const Rect&, const Rect&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// λ(A ∩ B) in closed form.
double intersection_volume(const Rect& a, const Rect& b);

/// Lebesgue measure of nA ∩ R_i where R_i = ]i_1-1, i_1] x ... x ]i_d-1, i_d].
double cube_overlap_weight(std::int64_t n, const Rect& a, const MultiIndex& i);

/// The one-dimensional factor of cube_overlap_weight along one axis.
inline double interval_overlap(double lo, double hi, std::int64_t i) {
  const double top = hi < static_cast<double>(i) ? hi : static_cast<double>(i);
  const double bottom = lo > static_cast<double>(i - 1) ? lo : static_cast<double>(i - 1);
  return top > bottom ? top - bottom : 0.0;
}

}  // namespace orthodec
