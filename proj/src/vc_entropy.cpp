#include "orthodec/vc_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "orthodec/error.hpp"

namespace orthodec {

namespace {

using Mask = std::uint64_t;

constexpr std::size_t kMaxPoints = 63;
constexpr std::size_t kMaxMembers = 20'000'000;

void validate_points(const SetClass& c, const std::vector<Point>& points) {
  if (points.size() > kMaxPoints) throw InputError("picked_count supports at most 63 points");
  for (const auto& x : points) {
    if (x.size() != c.d) throw InputError("point dimension does not match the class");
    for (double v : x)
      if (!(v >= 0.0 && v <= 1.0)) throw InputError("points must lie in [0,1]^d");
  }
  std::set<Point> seen(points.begin(), points.end());
  if (seen.size() != points.size()) throw InputError("picked_count: duplicate points");
}

std::vector<double> axis_values(const std::vector<Point>& points, std::size_t s) {
  std::vector<double> v;
  for (const auto& x : points) v.push_back(x[s]);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Mask> dedupe(std::vector<Mask> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Distinct per-axis masks reachable by the class, combined by intersection.
std::size_t count_products(const std::vector<std::vector<Mask>>& per_axis, bool with_empty) {
  std::unordered_set<Mask> picked;
  if (with_empty) picked.insert(0);
  std::vector<Mask> partial{~Mask{0}};
  for (const auto& axis : per_axis) {
    std::vector<Mask> next;
    next.reserve(partial.size() * axis.size());
    for (Mask a : partial)
      for (Mask b : axis) next.push_back(a & b);
    partial = dedupe(std::move(next));
  }
  for (Mask m : partial) picked.insert(m);
  return picked.size();
}

std::size_t picked_unchecked(const SetClass& c, const std::vector<Point>& points) {
  const std::size_t n = points.size();
  if (n == 0) return 1;
  const Mask all = n == 64 ? ~Mask{0} : ((Mask{1} << n) - 1);
  switch (c.kind) {
    case SetClass::Kind::quadrants: {
      std::vector<std::vector<Mask>> per_axis(c.d);
      for (std::size_t s = 0; s < c.d; ++s) {
        auto thresholds = axis_values(points, s);
        thresholds.push_back(0.0);
        for (double t : thresholds) {
          Mask m = 0;
          for (std::size_t i = 0; i < n; ++i)
            if (points[i][s] <= t) m |= Mask{1} << i;
          per_axis[s].push_back(m & all);
        }
        per_axis[s] = dedupe(std::move(per_axis[s]));
      }
      return count_products(per_axis, false);
    }
    case SetClass::Kind::boxes: {
      std::vector<std::vector<Mask>> per_axis(c.d);
      for (std::size_t s = 0; s < c.d; ++s) {
        const auto values = axis_values(points, s);
        for (std::size_t a = 0; a < values.size(); ++a) {
          for (std::size_t b = a; b < values.size(); ++b) {
            Mask m = 0;
            for (std::size_t i = 0; i < n; ++i)
              if (points[i][s] >= values[a] && points[i][s] <= values[b]) m |= Mask{1} << i;
            per_axis[s].push_back(m);
          }
        }
        per_axis[s] = dedupe(std::move(per_axis[s]));
      }
      // A degenerate box at a point missing from the set picks ∅.
      return count_products(per_axis, true);
    }
    case SetClass::Kind::explicit_list: {
      std::unordered_set<Mask> picked;
      for (const auto& member : c.members) {
        Mask m = 0;
        if (member)
          for (std::size_t i = 0; i < n; ++i)
            if (member->contains(points[i])) m |= Mask{1} << i;
        picked.insert(m);
      }
      return picked.size();
    }
  }
  return 0;
}

bool shattered(const SetClass& c, const std::vector<Point>& points) {
  return picked_unchecked(c, points) == (std::size_t{1} << points.size());
}

/// Exhaustive order-pattern search for grid classes: sizes n of point sets,
/// axis 1 sorted, coordinates in {1..n}/(n+1).
bool search_patterns(const SetClass& c, std::size_t n, std::size_t& budget, std::size_t& used,
                     std::vector<Point>& witness, bool& exhausted) {
  const std::size_t d = c.d;
  std::vector<std::vector<std::int64_t>> coord(d, std::vector<std::int64_t>(n, 1));
  auto grid = [n](std::int64_t r) { return static_cast<double>(r) / static_cast<double>(n + 1); };
  // Odometer over (axis 1 non-decreasing) x (other axes free).
  while (true) {
    if (used >= budget) {
      exhausted = true;
      return false;
    }
    ++used;
    std::vector<Point> pts(n, Point(d));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t s = 0; s < d; ++s) pts[i][s] = grid(coord[s][i]);
    std::set<Point> distinct(pts.begin(), pts.end());
    if (distinct.size() == n && shattered(c, pts)) {
      witness = pts;
      return true;
    }
    // Advance: last axis fastest, axis 1 last.
    std::size_t s = d;
    bool advanced = false;
    while (s-- > 0 && !advanced) {
      for (std::size_t i = n; i-- > 0;) {
        const auto cap = static_cast<std::int64_t>(n);
        if (coord[s][i] < cap) {
          ++coord[s][i];
          if (s == 0) {
            for (std::size_t k = i + 1; k < n; ++k) coord[0][k] = coord[0][i];
          } else {
            for (std::size_t k = i + 1; k < n; ++k) coord[s][k] = 1;
          }
          advanced = true;
          break;
        }
      }
      if (!advanced) std::fill(coord[s].begin(), coord[s].end(), 1);
    }
    if (!advanced) return false;
  }
}

/// Representatives of the cells cut out by the member boundaries.
std::vector<Point> explicit_candidates(const SetClass& c) {
  std::vector<std::vector<double>> cuts(c.d);
  for (std::size_t s = 0; s < c.d; ++s) {
    std::vector<double> v{0.0, 1.0};
    for (const auto& m : c.members)
      if (m) {
        v.push_back(m->lower()[s]);
        v.push_back(m->upper()[s]);
      }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    const std::size_t k = v.size();
    for (std::size_t i = 0; i + 1 < k; ++i) v.push_back(0.5 * (v[i] + v[i + 1]));
    std::sort(v.begin(), v.end());
    cuts[s] = std::move(v);
  }
  std::set<std::vector<bool>> seen;
  std::vector<Point> out;
  std::vector<std::size_t> pick(c.d, 0);
  while (true) {
    Point x(c.d);
    for (std::size_t s = 0; s < c.d; ++s) x[s] = cuts[s][pick[s]];
    std::vector<bool> sig;
    for (const auto& m : c.members) sig.push_back(m && m->contains(x));
    if (seen.insert(sig).second) out.push_back(x);
    std::size_t s = c.d;
    while (s-- > 0) {
      if (++pick[s] < cuts[s].size()) break;
      pick[s] = 0;
    }
    if (s == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

bool search_explicit(const SetClass& c, const std::vector<Point>& candidates, std::size_t n,
                     std::size_t& budget, std::size_t& used, std::vector<Point>& witness, bool& exhausted) {
  if (n > candidates.size()) return false;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (used >= budget) {
      exhausted = true;
      return false;
    }
    ++used;
    std::vector<Point> pts;
    for (auto i : idx) pts.push_back(candidates[i]);
    if (shattered(c, pts)) {
      witness = pts;
      return true;
    }
    std::size_t k = n;
    while (k-- > 0) {
      if (idx[k] < candidates.size() - n + k) {
        ++idx[k];
        for (std::size_t j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
    }
    if (k == static_cast<std::size_t>(-1)) return false;
  }
}

// ---------------------------------------------------------------------------
// Flat member storage for covering computations.

struct Members {
  std::size_t d = 0;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> vol;
  std::vector<bool> empty;

  std::size_t size() const { return vol.size(); }

  void add(const std::vector<double>& l, const std::vector<double>& h) {
    double v = 1.0;
    for (std::size_t s = 0; s < d; ++s) {
      lo.push_back(l[s]);
      hi.push_back(h[s]);
      v *= h[s] - l[s];
    }
    vol.push_back(v);
    empty.push_back(false);
  }

  void add_empty() {
    for (std::size_t s = 0; s < d; ++s) {
      lo.push_back(0.0);
      hi.push_back(0.0);
    }
    vol.push_back(0.0);
    empty.push_back(true);
  }

  double rho2(std::size_t a, std::size_t b) const {
    if (empty[a]) return vol[b];
    if (empty[b]) return vol[a];
    double inter = 1.0;
    for (std::size_t s = 0; s < d && inter > 0.0; ++s) {
      const double top = std::min(hi[a * d + s], hi[b * d + s]);
      const double bottom = std::max(lo[a * d + s], lo[b * d + s]);
      inter *= top > bottom ? top - bottom : 0.0;
    }
    return std::max(0.0, vol[a] + vol[b] - 2.0 * inter);
  }
};

std::size_t grid_member_count(const SetClass& c) {
  const double m = std::ldexp(1.0, c.level);
  const double per_axis = c.kind == SetClass::Kind::quadrants ? m + 1.0 : (m + 1.0) * (m + 2.0) / 2.0;
  return static_cast<std::size_t>(std::min(1e18, std::pow(per_axis, static_cast<double>(c.d))));
}

Members enumerate_members(const SetClass& c) {
  Members out;
  out.d = c.d;
  if (c.kind == SetClass::Kind::explicit_list) {
    for (const auto& m : c.members) {
      if (m) {
        out.add(m->lower(), m->upper());
      } else {
        out.add_empty();
      }
    }
    return out;
  }
  if (grid_member_count(c) > kMaxMembers) {
    throw InputError("parameter grid of " + c.name() + " at level " + std::to_string(c.level) +
                     " has too many members; lower the resolution");
  }
  const std::int64_t m = std::int64_t{1} << c.level;
  std::vector<std::pair<double, double>> intervals;
  for (std::int64_t b = 0; b <= m; ++b) {
    if (c.kind == SetClass::Kind::quadrants) {
      intervals.emplace_back(0.0, std::ldexp(static_cast<double>(b), -c.level));
    } else {
      for (std::int64_t a = 0; a <= b; ++a)
        intervals.emplace_back(std::ldexp(static_cast<double>(a), -c.level),
                               std::ldexp(static_cast<double>(b), -c.level));
    }
  }
  std::vector<std::size_t> pick(c.d, 0);
  std::vector<double> l(c.d);
  std::vector<double> h(c.d);
  while (true) {
    for (std::size_t s = 0; s < c.d; ++s) {
      l[s] = intervals[pick[s]].first;
      h[s] = intervals[pick[s]].second;
    }
    out.add(l, h);
    std::size_t s = c.d;
    while (s-- > 0) {
      if (++pick[s] < intervals.size()) break;
      pick[s] = 0;
    }
    if (s == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::size_t greedy_net(const Members& mem, double radius) {
  const double r2 = radius * radius;
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < mem.size(); ++i) {
    bool covered = false;
    for (auto it = centers.rbegin(); it != centers.rend() && !covered; ++it) covered = mem.rho2(i, *it) < r2;
    if (!covered) centers.push_back(i);
  }
  if (centers.size() > 1 && radius >= 0.5) {
    // A single well-placed center may cover everything the greedy order splits.
    const std::size_t probes = std::min<std::size_t>(mem.size(), 257);
    for (std::size_t k = 0; k < probes; ++k) {
      const std::size_t c = k * (mem.size() - 1) / std::max<std::size_t>(1, probes - 1);
      bool all = true;
      for (std::size_t i = 0; i < mem.size() && all; ++i) all = mem.rho2(i, c) < r2;
      if (all) return 1;
    }
  }
  return centers.size();
}

std::size_t greedy_packing(const Members& mem, double separation) {
  const double s2 = separation * separation;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < mem.size(); ++i) {
    bool far = true;
    for (auto it = chosen.rbegin(); it != chosen.rend() && far; ++it) far = mem.rho2(i, *it) >= s2;
    if (far) chosen.push_back(i);
  }
  return chosen.size();
}

CoveringBracket bracket(const Members& mem, double eps, double delta) {
  return {eps, greedy_net(mem, eps - delta), std::max<std::size_t>(1, greedy_packing(mem, 2.0 * eps))};
}

void require_resolution(const SetClass& c, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
  const double delta = discretization_error(c);
  if (delta >= eps / 4.0) {
    // δ² = factor·2^-level, need δ < ε/4.
    const double factor = delta * delta * std::ldexp(1.0, c.level);
    const int needed = static_cast<int>(std::floor(std::log2(16.0 * factor / (eps * eps)))) + 1;
    throw InputError("epsilon " + std::to_string(eps) + " too small for grid level " + std::to_string(c.level) +
                     " (discretization error " + std::to_string(delta) + "); need level >= " +
                     std::to_string(needed));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SetClass SetClass::quadrants(std::size_t d, int level) {
  if (d == 0) throw InputError("d must be at least 1");
  if (level < 0 || level > 24) throw InputError("grid level must lie in 0..24");
  SetClass c;
  c.kind = Kind::quadrants;
  c.d = d;
  c.level = level;
  return c;
}

SetClass SetClass::boxes(std::size_t d, int level) {
  SetClass c = quadrants(d, level);
  c.kind = Kind::boxes;
  return c;
}

SetClass SetClass::explicit_list(std::size_t d, std::vector<std::optional<Rect>> members) {
  if (d == 0) throw InputError("d must be at least 1");
  if (members.empty()) throw InputError("explicit class needs at least one member");
  for (const auto& m : members)
    if (m && m->dim() != d) throw InputError("explicit class member dimension mismatch");
  SetClass c;
  c.kind = Kind::explicit_list;
  c.d = d;
  c.members = std::move(members);
  c.level = 0;
  return c;
}

std::string SetClass::name() const {
  switch (kind) {
    case Kind::quadrants: return "Q" + std::to_string(d);
    case Kind::boxes: return "Q'" + std::to_string(d);
    case Kind::explicit_list: return "explicit(" + std::to_string(members.size()) + ")";
  }
  return "?";
}

SetClass set_class_from_string(const std::string& name, int level) {
  auto parse_d = [&](std::size_t at) -> std::size_t {
    if (at >= name.size()) throw InputError("class name '" + name + "' lacks a dimension");
    std::size_t d = 0;
    for (std::size_t k = at; k < name.size(); ++k) {
      if (name[k] < '0' || name[k] > '9') throw InputError("malformed class name '" + name + "'");
      d = d * 10 + static_cast<std::size_t>(name[k] - '0');
    }
    return d;
  };
  if (name.size() >= 2 && name[0] == 'Q') {
    if (name[1] == '\'' || name[1] == 'p') return SetClass::boxes(parse_d(2), level);
    return SetClass::quadrants(parse_d(1), level);
  }
  throw InputError("unknown set class '" + name + "' (expected Q<d> or Q'<d>)");
}

std::size_t picked_count(const SetClass& c, const std::vector<Point>& points) {
  validate_points(c, points);
  return picked_unchecked(c, points);
}

VcResult vc_index(const SetClass& c, std::size_t max_n, std::size_t budget) {
  if (max_n < 1 || max_n > 16) throw InputError("vc_index max_n must lie in 1..16");
  VcResult res;
  std::vector<Point> candidates;
  if (c.kind == SetClass::Kind::explicit_list) candidates = explicit_candidates(c);
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::vector<Point> witness;
    bool exhausted = false;
    const bool found = c.kind == SetClass::Kind::explicit_list
                           ? search_explicit(c, candidates, n, budget, res.configurations, witness, exhausted)
                           : search_patterns(c, n, budget, res.configurations, witness, exhausted);
    if (found) {
      res.witness = std::move(witness);
      continue;
    }
    res.index = n;
    res.exact = !exhausted;
    return res;
  }
  res.index = max_n + 1;
  res.exact = false;
  return res;
}

double rho(const Rect& a, const Rect& b) {
  if (a.dim() != b.dim()) throw InputError("rho: dimension mismatch");
  return std::sqrt(std::max(0.0, a.volume() + b.volume() - 2.0 * intersection_volume(a, b)));
}

double rho(const std::optional<Rect>& a, const std::optional<Rect>& b) {
  if (a && b) return rho(*a, *b);
  if (a) return std::sqrt(a->volume());
  if (b) return std::sqrt(b->volume());
  return 0.0;
}

double discretization_error(const SetClass& c) {
  const double h = std::ldexp(1.0, -c.level);
  const double d = static_cast<double>(c.d);
  switch (c.kind) {
    case SetClass::Kind::quadrants: return std::sqrt(d * h / 2.0);  // each corner moves by <= h/2
    case SetClass::Kind::boxes: return std::sqrt(d * h);            // both corners move
    case SetClass::Kind::explicit_list: return 0.0;
  }
  return 0.0;
}

CoveringBracket covering_number(const SetClass& c, double eps) {
  require_resolution(c, eps);
  return bracket(enumerate_members(c), eps, discretization_error(c));
}

CoveringReport entropy_integral(const SetClass& c, const std::vector<double>& epsilons, double p, std::size_t vc) {
  if (epsilons.empty()) throw InputError("entropy_integral needs an epsilon grid");
  for (std::size_t k = 1; k < epsilons.size(); ++k)
    if (!(epsilons[k] > epsilons[k - 1])) throw InputError("epsilon grid must be strictly increasing");
  for (double e : epsilons) require_resolution(c, e);
  if (!(p >= 1.0)) throw InputError("p must be at least 1");
  if (vc < 1) throw InputError("VC index must be at least 1");

  CoveringReport rep;
  rep.class_name = c.name();
  rep.d = c.d;
  rep.level = c.level;
  rep.delta = discretization_error(c);
  rep.epsilons = epsilons;
  rep.p = p;
  rep.vc = vc;
  const Members mem = enumerate_members(c);
  for (double e : epsilons) {
    const auto b = bracket(mem, e, rep.delta);
    rep.upper.push_back(b.upper);
    rep.lower.push_back(b.lower);
  }
  const std::size_t m = epsilons.size();
  // A cover at radius ε' <= ε covers at ε; a packing at ε' >= ε bounds N(ε).
  for (std::size_t k = 1; k < m; ++k) rep.upper[k] = std::min(rep.upper[k], rep.upper[k - 1]);
  for (std::size_t k = m - 1; k-- > 0;) rep.lower[k] = std::max(rep.lower[k], rep.lower[k + 1]);
  for (auto u : rep.upper) rep.entropy.push_back(std::log(static_cast<double>(u)));

  // Least squares of log N on log ε over points with N >= 2.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, cnt = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (rep.upper[k] < 2) continue;
    const double x = std::log(epsilons[k]);
    const double y = rep.entropy[k];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1.0;
  }
  if (cnt >= 2.0 && sxx * cnt - sx * sx > 0.0) {
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    rep.fitted_exponent = -slope;
    rep.fitted_log_constant = (sy - slope * sx) / cnt;
  } else {
    rep.fitted_exponent = 0.0;
    rep.fitted_log_constant = rep.entropy.front();
  }
  const double a = std::max(0.0, rep.fitted_exponent);
  const double log_c = rep.fitted_log_constant;
  const double e_min = epsilons.front();
  const double e_max = epsilons.back();

  // ∫ sqrt(H): trapezoid on the grid, constant continuation above, power-law
  // tail below via u = -log ε.
  double dudley = 0.0;
  double np = 0.0;
  for (std::size_t k = 1; k < m; ++k) {
    const double w = epsilons[k] - epsilons[k - 1];
    dudley += 0.5 * w * (std::sqrt(rep.entropy[k]) + std::sqrt(rep.entropy[k - 1]));
    np += 0.5 * w *
          (std::pow(static_cast<double>(rep.upper[k]), 1.0 / p) +
           std::pow(static_cast<double>(rep.upper[k - 1]), 1.0 / p));
  }
  if (e_max < 1.0) {
    dudley += (1.0 - e_max) * std::sqrt(rep.entropy.back());
    np += (1.0 - e_max) * std::pow(static_cast<double>(rep.upper.back()), 1.0 / p);
  }
  {
    const double u0 = -std::log(e_min);
    const int steps = 20000;
    const double span = 80.0;
    const double du = span / steps;
    double tail = 0.0;
    for (int k = 0; k <= steps; ++k) {
      const double u = u0 + du * k;
      const double f = std::sqrt(std::max(0.0, log_c + a * u)) * std::exp(-u);
      tail += (k == 0 || k == steps ? 0.5 : 1.0) * f * du;
    }
    dudley += tail;
  }
  rep.dudley_integral = dudley;
  rep.dudley_finite = std::isfinite(dudley) && std::isfinite(rep.fitted_exponent);
  if (p > a) {
    np += std::exp(log_c / p) * std::pow(e_min, 1.0 - a / p) / (1.0 - a / p);
    rep.np_finite = std::isfinite(np);
  } else {
    np = std::numeric_limits<double>::infinity();
    rep.np_finite = false;
  }
  rep.np_integral = np;

  const double v = static_cast<double>(vc);
  rep.vw_exponent = 2.0 * (v - 1.0);
  auto shape = [&](double e) { return v * std::pow(4.0 * std::exp(1.0), v) * std::pow(e, -rep.vw_exponent); };
  for (std::size_t k = 0; k < m; ++k)
    rep.vw_constant = std::max(rep.vw_constant, static_cast<double>(rep.upper[k]) / shape(epsilons[k]));
  rep.below_envelope = true;
  for (std::size_t k = 0; k < m; ++k) {
    rep.vw_envelope.push_back(rep.vw_constant * shape(epsilons[k]));
    rep.below_envelope = rep.below_envelope && static_cast<double>(rep.upper[k]) <= rep.vw_envelope[k] * (1.0 + 1e-12);
  }
  return rep;
}

}  // namespace orthodec
