#include "orthodec/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "orthodec/error.hpp"

namespace orthodec {

namespace {

/// Per-axis weight of the cubes R_i meeting nA: at most three runs
/// (partial first cube, full middle cubes, partial last cube).
struct Segment {
  std::int64_t lo;
  std::int64_t hi;
  double weight;
};

std::vector<Segment> axis_segments(std::int64_t n, double lower, double upper) {
  const double a = static_cast<double>(n) * lower;
  const double b = static_cast<double>(n) * upper;
  std::vector<Segment> out;
  if (!(b > a)) return out;
  const std::int64_t first = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(a)) + 1);
  const std::int64_t last = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::ceil(b)));
  if (first > last) return out;
  const double w_first = interval_overlap(a, b, first);
  if (first == last) {
    if (w_first > 0.0) out.push_back({first, first, w_first});
    return out;
  }
  if (w_first > 0.0) out.push_back({first, first, w_first});
  if (last - first >= 2) out.push_back({first + 1, last - 1, 1.0});
  const double w_last = interval_overlap(a, b, last);
  if (w_last > 0.0) out.push_back({last, last, w_last});
  return out;
}

void require_grid_cover(const GridSample& x, std::int64_t n) {
  if (n < 1) throw InputError("n must be positive");
  if (!x.box.covers(Box::grid(x.box.dim(), n))) {
    throw InputError("sample does not cover <" + std::to_string(n) + ">^" + std::to_string(x.box.dim()));
  }
}

std::pair<MultiIndex, MultiIndex> support_bounds(const ChaosElement& a) {
  const std::size_t d = a.dim();
  if (a.empty()) throw InputError("linear field needs at least one nonzero coefficient");
  MultiIndex lo = MultiIndex::zero(d);
  MultiIndex hi = MultiIndex::zero(d);
  for (std::size_t s = 1; s <= d; ++s) {
    lo[s - 1] = a.min_coord(s);
    hi[s - 1] = a.max_coord(s);
  }
  return {lo, hi};
}

double normalizer(std::int64_t n, std::size_t d) {
  return std::pow(static_cast<double>(n), -static_cast<double>(d) / 2.0);
}

double euclid(const std::vector<double>& s, const std::vector<double>& t) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) acc += (s[k] - t[k]) * (s[k] - t[k]);
  return std::sqrt(acc);
}

}  // namespace

// ---------------------------------------------------------------------------

Box Box::grid(std::size_t d, std::int64_t n) {
  if (d == 0 || n < 1) throw InputError("grid needs d >= 1 and n >= 1");
  return Box{MultiIndex::filled(d, 1), std::vector<std::int64_t>(d, n)};
}

std::size_t Box::size() const {
  std::size_t s = 1;
  for (auto e : extents) s *= static_cast<std::size_t>(e);
  return s;
}

MultiIndex Box::upper() const {
  MultiIndex u = lower;
  for (std::size_t s = 0; s < dim(); ++s) u[s] += extents[s] - 1;
  return u;
}

bool Box::contains(const MultiIndex& i) const {
  if (i.dim() != dim()) return false;
  for (std::size_t s = 0; s < dim(); ++s)
    if (i[s] < lower[s] || i[s] >= lower[s] + extents[s]) return false;
  return true;
}

bool Box::covers(const Box& other) const {
  return other.dim() == dim() && contains(other.lower) && contains(other.upper());
}

std::size_t Box::offset(const MultiIndex& i) const {
  std::size_t off = 0;
  for (std::size_t s = 0; s < dim(); ++s)
    off = off * static_cast<std::size_t>(extents[s]) + static_cast<std::size_t>(i[s] - lower[s]);
  return off;
}

MultiIndex Box::index_at(std::size_t offset) const {
  MultiIndex i = lower;
  for (std::size_t s = dim(); s-- > 0;) {
    const auto e = static_cast<std::size_t>(extents[s]);
    i[s] += static_cast<std::int64_t>(offset % e);
    offset /= e;
  }
  return i;
}

GridSample sample_innovations(const InnovationLaw& law, const Box& box, std::uint64_t seed,
                              std::uint64_t replica) {
  if (box.dim() == 0 || box.extents.size() != box.dim()) throw InputError("malformed box");
  for (auto e : box.extents)
    if (e < 1) throw InputError("box extents must be positive");
  GridSample out{box, std::vector<double>(box.size()), {law.sampler_id(), seed, replica}};
  const InnovationField field(law, seed, replica);
  MultiIndex i = box.lower;
  for (std::size_t off = 0; off < out.values.size(); ++off) {
    out.values[off] = field.at(i);
    for (std::size_t s = box.dim(); s-- > 0;) {
      if (++i[s] < box.lower[s] + box.extents[s]) break;
      i[s] = box.lower[s];
    }
  }
  return out;
}

GridSample sample_linear_field(const ChaosElement& a, const GridSample& innovations) {
  const auto [lo, hi] = support_bounds(a);
  const std::size_t d = a.dim();
  if (innovations.box.dim() != d) throw InputError("coefficient and innovation dimensions differ");
  Box target{innovations.box.lower + hi, std::vector<std::int64_t>(d)};
  for (std::size_t s = 0; s < d; ++s) {
    target.extents[s] = innovations.box.extents[s] - (hi[s] - lo[s]);
    if (target.extents[s] < 1) throw InputError("innovation box smaller than the coefficient support");
  }
  return sample_linear_field(a, innovations, target);
}

GridSample sample_linear_field(const ChaosElement& a, const GridSample& innovations, const Box& target) {
  const auto [lo, hi] = support_bounds(a);
  const std::size_t d = a.dim();
  const Box& ib = innovations.box;
  if (ib.dim() != d || target.dim() != d) throw InputError("coefficient, innovation and target dimensions differ");
  // X_k needs ε_{k-j} for all j in [lo, hi]: innovations must span [target.lower - hi, target.upper - lo].
  const MultiIndex need_lo = target.lower - hi;
  const MultiIndex need_hi = target.upper() - lo;
  if (!ib.contains(need_lo) || !ib.contains(need_hi)) {
    std::ostringstream os;
    os << "insufficient innovation margin: target " << target.lower.to_string() << ".."
       << target.upper().to_string() << " needs innovations on " << need_lo.to_string() << ".."
       << need_hi.to_string() << " but the sample covers " << ib.lower.to_string() << ".."
       << ib.upper().to_string();
    throw InputError(os.str());
  }
  std::vector<std::ptrdiff_t> stride(d, 1);
  for (std::size_t s = d - 1; s-- > 0;) stride[s] = stride[s + 1] * ib.extents[s + 1];
  std::vector<std::pair<std::ptrdiff_t, double>> taps;
  for (const auto& [j, c] : a.coeffs()) {
    std::ptrdiff_t delta = 0;
    for (std::size_t s = 0; s < d; ++s) delta += static_cast<std::ptrdiff_t>(j[s]) * stride[s];
    taps.emplace_back(delta, c);
  }
  GridSample out{target, std::vector<double>(target.size()),
                 {innovations.provenance.sampler_id + "/linear", innovations.provenance.seed,
                  innovations.provenance.replica}};
  MultiIndex k = target.lower;
  for (std::size_t off = 0; off < out.values.size(); ++off) {
    const auto base = static_cast<std::ptrdiff_t>(ib.offset(k));
    double v = 0.0;
    for (const auto& [delta, c] : taps) v += c * innovations.values[static_cast<std::size_t>(base - delta)];
    out.values[off] = v;
    for (std::size_t s = d; s-- > 0;) {
      if (++k[s] < target.lower[s] + target.extents[s]) break;
      k[s] = target.lower[s];
    }
  }
  return out;
}

GridSample linear_field_on_grid(const ChaosElement& a, const InnovationLaw& law, std::int64_t n,
                                std::uint64_t seed, std::uint64_t replica) {
  const auto [lo, hi] = support_bounds(a);
  const std::size_t d = a.dim();
  const Box target = Box::grid(d, n);
  Box need{target.lower - hi, std::vector<std::int64_t>(d)};
  for (std::size_t s = 0; s < d; ++s) need.extents[s] = n + (hi[s] - lo[s]);
  return sample_linear_field(a, sample_innovations(law, need, seed, replica), target);
}

std::vector<double> product_axis_sequence(std::uint64_t seed, std::int64_t n, std::size_t axis,
                                          std::uint64_t replica) {
  if (n < 1) throw InputError("n must be positive");
  const auto stream = static_cast<std::uint32_t>(Stream::product_axis_base) + static_cast<std::uint32_t>(axis);
  std::vector<double> eta(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) {
    const auto bits = random_bits(seed, replica, stream, MultiIndex{i});
    eta[static_cast<std::size_t>(i - 1)] = (bits[0] & 1u) ? 1.0 : -1.0;
  }
  return eta;
}

GridSample sample_product_omd(std::uint64_t seed, std::int64_t n, std::size_t d, std::uint64_t replica) {
  const Box box = Box::grid(d, n);
  std::vector<std::vector<double>> eta;
  for (std::size_t s = 1; s <= d; ++s) eta.push_back(product_axis_sequence(seed, n, s, replica));
  GridSample out{box, std::vector<double>(box.size()), {"philox4x32-10/product-rademacher", seed, replica}};
  for (std::size_t off = 0; off < out.values.size(); ++off) {
    const MultiIndex i = box.index_at(off);
    double z = 1.0;
    for (std::size_t s = 0; s < d; ++s) z *= eta[s][static_cast<std::size_t>(i[s] - 1)];
    out.values[off] = z;
  }
  return out;
}

double partial_sum(const GridSample& x, const Rect& a, std::int64_t n) {
  require_grid_cover(x, n);
  const std::size_t d = x.box.dim();
  if (a.dim() != d) throw InputError("rectangle dimension mismatch");
  std::vector<std::vector<double>> w(d, std::vector<double>(static_cast<std::size_t>(n)));
  for (std::size_t s = 0; s < d; ++s)
    for (std::int64_t i = 1; i <= n; ++i)
      w[s][static_cast<std::size_t>(i - 1)] =
          interval_overlap(static_cast<double>(n) * a.lower()[s], static_cast<double>(n) * a.upper()[s], i);
  double total = 0.0;
  MultiIndex i = MultiIndex::filled(d, 1);
  while (true) {
    double weight = 1.0;
    for (std::size_t s = 0; s < d && weight != 0.0; ++s) weight *= w[s][static_cast<std::size_t>(i[s] - 1)];
    if (weight != 0.0) total += weight * x.at(i);
    std::size_t s = d;
    while (s-- > 0) {
      if (++i[s] <= n) break;
      i[s] = 1;
    }
    if (s == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

PartialSumEvaluator::PartialSumEvaluator(const GridSample& x, std::int64_t n) : d_(x.box.dim()), n_(n) {
  require_grid_cover(x, n);
  const Box table{MultiIndex::zero(d_), std::vector<std::int64_t>(d_, n + 1)};
  prefix_.assign(table.size(), 0.0);
  for (std::size_t off = 0; off < prefix_.size(); ++off) {
    const MultiIndex k = table.index_at(off);
    bool inside = true;
    for (std::size_t s = 0; s < d_; ++s) inside = inside && k[s] >= 1;
    if (inside) prefix_[off] = x.at(k);
  }
  // Cumulative sums along each axis in turn.
  std::size_t stride = 1;
  for (std::size_t s = d_; s-- > 0;) {
    const auto ext = static_cast<std::size_t>(n + 1);
    for (std::size_t off = 0; off < prefix_.size(); ++off)
      if ((off / stride) % ext != 0) prefix_[off] += prefix_[off - stride];
    stride *= ext;
  }
}

double PartialSumEvaluator::prefix(const std::vector<std::int64_t>& k) const {
  std::size_t off = 0;
  for (std::size_t s = 0; s < d_; ++s) {
    if (k[s] <= 0) return 0.0;
    off = off * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(k[s]);
  }
  return prefix_[off];
}

double PartialSumEvaluator::block(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi) const {
  double total = 0.0;
  std::vector<std::int64_t> corner(d_);
  for (std::uint32_t mask = 0; mask < (1u << d_); ++mask) {
    int sign = 1;
    for (std::size_t s = 0; s < d_; ++s) {
      if (mask & (1u << s)) {
        corner[s] = lo[s] - 1;
        sign = -sign;
      } else {
        corner[s] = hi[s];
      }
    }
    total += sign * prefix(corner);
  }
  return total;
}

double PartialSumEvaluator::operator()(const Rect& a) const {
  if (a.dim() != d_) throw InputError("rectangle dimension mismatch");
  std::vector<std::vector<Segment>> segs(d_);
  for (std::size_t s = 0; s < d_; ++s) {
    segs[s] = axis_segments(n_, a.lower()[s], a.upper()[s]);
    if (segs[s].empty()) return 0.0;
  }
  double total = 0.0;
  std::vector<std::size_t> pick(d_, 0);
  std::vector<std::int64_t> lo(d_);
  std::vector<std::int64_t> hi(d_);
  while (true) {
    double weight = 1.0;
    for (std::size_t s = 0; s < d_; ++s) {
      const Segment& g = segs[s][pick[s]];
      lo[s] = g.lo;
      hi[s] = g.hi;
      weight *= g.weight;
    }
    total += weight * block(lo, hi);
    std::size_t s = d_;
    while (s-- > 0) {
      if (++pick[s] < segs[s].size()) break;
      pick[s] = 0;
    }
    if (s == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

// ---------------------------------------------------------------------------

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::linear: return "linear";
    case FieldKind::product_omd: return "product_omd";
    case FieldKind::iid: return "iid";
  }
  return "?";
}

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::endpoint: return "endpoint";
    case StatisticKind::fixed_points: return "fixed_points";
    case StatisticKind::rectangles: return "rectangles";
    case StatisticKind::sup_modulus: return "sup_modulus";
  }
  return "?";
}

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "linear") return FieldKind::linear;
  if (s == "product_omd" || s == "product") return FieldKind::product_omd;
  if (s == "iid") return FieldKind::iid;
  throw InputError("unknown field kind '" + s + "'");
}

StatisticKind statistic_kind_from_string(const std::string& s) {
  if (s == "endpoint") return StatisticKind::endpoint;
  if (s == "fixed_points") return StatisticKind::fixed_points;
  if (s == "rectangles") return StatisticKind::rectangles;
  if (s == "sup_modulus") return StatisticKind::sup_modulus;
  throw InputError("unknown statistic '" + s + "'");
}

std::vector<double> EmpiricalSample::column(std::size_t c) const {
  if (c >= width) throw InputError("column out of range");
  std::vector<double> out(replicas);
  for (std::size_t r = 0; r < replicas; ++r) out[r] = at(r, c);
  return out;
}

void validate(const ExperimentSpec& spec) {
  if (spec.d == 0) throw InputError("experiment needs d >= 1");
  if (spec.n < 1) throw InputError("experiment needs n >= 1");
  if (spec.replicas < 1) throw InputError("experiment needs replicas >= 1");
  if (spec.field == FieldKind::linear) {
    if (spec.coeffs.dim() != spec.d) throw InputError("linear field coefficients must have dimension d");
    if (spec.coeffs.empty()) throw InputError("linear field needs at least one nonzero coefficient");
  }
  if (spec.field == FieldKind::product_omd && spec.law.kind() != InnovationLaw::Kind::rademacher) {
    throw InputError("the product field is built from Rademacher factors only");
  }
  switch (spec.statistic) {
    case StatisticKind::endpoint:
      break;
    case StatisticKind::fixed_points:
      if (spec.points.empty()) throw InputError("fixed_points statistic needs at least one point");
      for (const auto& t : spec.points) {
        if (t.size() != spec.d) throw InputError("fixed point dimension mismatch");
        for (double v : t)
          if (!(v >= 0.0 && v <= 1.0)) throw InputError("fixed points must lie in [0,1]^d");
      }
      break;
    case StatisticKind::rectangles:
      if (spec.rectangles.empty()) throw InputError("rectangles statistic needs at least one rectangle");
      for (const auto& r : spec.rectangles)
        if (r.dim() != spec.d) throw InputError("rectangle dimension mismatch");
      break;
    case StatisticKind::sup_modulus:
      if (spec.grid_level < 1 || spec.grid_level > 8) throw InputError("sup_modulus grid level must lie in 1..8");
      if (!(spec.gamma >= 0.0 && spec.gamma < 1.0)) throw InputError("sup_modulus gamma must lie in [0,1)");
      break;
  }
}

GridSample sample_field(const ExperimentSpec& spec, std::uint64_t replica) {
  switch (spec.field) {
    case FieldKind::linear:
      return linear_field_on_grid(spec.coeffs, spec.law, spec.n, spec.seed, replica);
    case FieldKind::product_omd:
      return sample_product_omd(spec.seed, spec.n, spec.d, replica);
    case FieldKind::iid:
      return sample_innovations(spec.law, Box::grid(spec.d, spec.n), spec.seed, replica);
  }
  throw InputError("unknown field kind");
}

std::vector<std::vector<double>> dyadic_points(std::size_t d, int level) {
  if (d == 0 || level < 0 || level > 20) throw InputError("dyadic grid needs d >= 1 and level in 0..20");
  const std::int64_t m = std::int64_t{1} << level;
  const Box box{MultiIndex::zero(d), std::vector<std::int64_t>(d, m + 1)};
  std::vector<std::vector<double>> out(box.size(), std::vector<double>(d));
  for (std::size_t off = 0; off < out.size(); ++off) {
    const MultiIndex k = box.index_at(off);
    for (std::size_t s = 0; s < d; ++s) out[off][s] = std::ldexp(static_cast<double>(k[s]), -level);
  }
  return out;
}

std::vector<double> evaluate_statistic(const ExperimentSpec& spec, const GridSample& x) {
  const double scale = normalizer(spec.n, spec.d);
  switch (spec.statistic) {
    case StatisticKind::endpoint: {
      double total = 0.0;
      for (double v : x.values) total += v;
      return {scale * total};
    }
    case StatisticKind::fixed_points: {
      const PartialSumEvaluator eval(x, spec.n);
      std::vector<double> out;
      out.reserve(spec.points.size());
      for (const auto& t : spec.points) out.push_back(scale * eval(Rect::quadrant(t)));
      return out;
    }
    case StatisticKind::rectangles: {
      const PartialSumEvaluator eval(x, spec.n);
      std::vector<double> out;
      out.reserve(spec.rectangles.size());
      for (const auto& r : spec.rectangles) out.push_back(scale * eval(r));
      return out;
    }
    case StatisticKind::sup_modulus: {
      const PartialSumEvaluator eval(x, spec.n);
      const auto grid = dyadic_points(spec.d, spec.grid_level);
      std::vector<double> y;
      y.reserve(grid.size());
      for (const auto& t : grid) y.push_back(scale * eval(Rect::quadrant(t)));
      double sup = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j)
          sup = std::max(sup, std::abs(y[i] - y[j]) / std::pow(euclid(grid[i], grid[j]), spec.gamma));
      return {sup};
    }
  }
  throw InputError("unknown statistic");
}

EmpiricalSample run_experiment(const ExperimentSpec& spec, std::size_t workers) {
  validate(spec);
  const std::size_t width = evaluate_statistic(spec, sample_field(spec, 0)).size();
  EmpiricalSample out;
  out.replicas = spec.replicas;
  out.width = width;
  out.seed = spec.seed;
  out.values.assign(spec.replicas * width, 0.0);
  out.sampler_id = sample_field(spec, 0).provenance.sampler_id;

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t r = next++; r < spec.replicas; r = next++) {
        const auto row = evaluate_statistic(spec, sample_field(spec, r));
        std::copy(row.begin(), row.end(), out.values.begin() + static_cast<std::ptrdiff_t>(r * width));
      }
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = spec.replicas;
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, spec.replicas);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

PathSample sample_paths(ExperimentSpec spec, int level, std::size_t workers) {
  if (level < 1 || level > 8) throw InputError("path grid level must lie in 1..8");
  spec.statistic = StatisticKind::fixed_points;
  spec.points = dyadic_points(spec.d, level);
  PathSample out;
  out.n = spec.n;
  out.points = spec.points;
  out.sample = run_experiment(spec, workers);
  return out;
}

}  // namespace orthodec
