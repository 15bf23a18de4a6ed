#include "coarsedim/gallery.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

namespace coarsedim {

namespace {

void check_cap(std::size_t count, const Limits& limits, const char* what) {
  if (count > limits.max_points) {
    throw CapExceeded(std::string(what) + " would have more than " + std::to_string(limits.max_points) + " points");
  }
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("tower parameter overflows 64 bits");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("tower parameter overflows 64 bits");
  return out;
}

// Enumerates coordinate vectors with sum_a cost(a, x_a) <= cutoff, where axis a
// ranges over [0, moduli[a]) and cost(a, x) = weights[a] * min(x, m - x).
// Returns the rows sorted by (norm, coordinates).
std::vector<std::int64_t> cyclic_ball(const std::vector<std::int64_t>& moduli, const std::vector<std::int64_t>& weights,
                                      std::int64_t cutoff, const Limits& limits, const char* what) {
  const std::size_t dims = moduli.size();
  std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> rows;
  std::vector<std::int64_t> current(dims, 0);
  auto recurse = [&](auto&& self, std::size_t axis, std::int64_t used) -> void {
    if (axis == dims) {
      rows.emplace_back(used, current);
      check_cap(rows.size(), limits, what);
      return;
    }
    const auto m = moduli[axis];
    for (std::int64_t x = 0; x < m; ++x) {
      const auto cost = weights[axis] * std::min(x, m - x);
      if (used + cost > cutoff) continue;
      current[axis] = x;
      self(self, axis + 1, used + cost);
    }
    current[axis] = 0;
  };
  recurse(recurse, 0, 0);
  std::sort(rows.begin(), rows.end());
  std::vector<std::int64_t> values;
  values.reserve(rows.size() * dims);
  for (const auto& [norm, row] : rows) values.insert(values.end(), row.begin(), row.end());
  return values;
}

}  // namespace

FiniteMetricSpace zd_ball(std::size_t d, std::int64_t radius, const Limits& limits) {
  if (d == 0) throw std::invalid_argument("zd_ball needs d >= 1");
  if (radius < 0) throw std::invalid_argument("zd_ball needs radius >= 0");
  CoordinateTable t;
  t.dims = d;
  t.norm = Norm::kL1;
  std::vector<std::int64_t> current(d, 0);
  std::size_t count = 0;
  auto recurse = [&](auto&& self, std::size_t axis, std::int64_t budget) -> void {
    if (axis == d) {
      check_cap(++count, limits, "lattice ball");
      t.values.insert(t.values.end(), current.begin(), current.end());
      return;
    }
    for (std::int64_t x = -budget; x <= budget; ++x) {
      current[axis] = x;
      self(self, axis + 1, budget - (x < 0 ? -x : x));
    }
  };
  recurse(recurse, 0, radius);
  return FiniteMetricSpace::from_coordinates(std::move(t), {}, {}, limits);
}

FiniteMetricSpace interval_space(std::int64_t lo, std::int64_t hi, const Limits& limits) {
  if (hi < lo) throw std::invalid_argument("interval needs lo <= hi");
  check_cap(static_cast<std::size_t>(hi - lo + 1), limits, "interval");
  CoordinateTable t;
  t.dims = 1;
  for (auto x = lo; x <= hi; ++x) t.values.push_back(x);
  return FiniteMetricSpace::from_coordinates(std::move(t), {}, {}, limits);
}

FiniteMetricSpace line_space(const std::vector<std::int64_t>& points) {
  CoordinateTable t;
  t.dims = 1;
  t.values = points;
  Limits limits;
  limits.max_points = std::max(limits.max_points, points.size());
  return FiniteMetricSpace::from_coordinates(std::move(t), {}, {}, limits);
}

namespace {

// Bricks of `grids` shifted grids; see brick_cover.
KFamilyCover grid_bricks(const PointSubset& carrier, const Distance& r, std::span<const std::size_t> axes,
                         std::size_t grids) {
  const std::size_t d = axes.size();
  if (d == 0) throw std::invalid_argument("brick cover needs at least one axis");
  KFamilyCover out;
  out.carrier = carrier;
  out.scale = r;
  out.n = static_cast<int>(grids) - 1;
  out.families.resize(grids);
  if (carrier.empty()) {
    out.bound = Distance(0);
    return out;
  }
  if (r.is_infinite() || diameter(carrier) <= r) {
    for (auto& family : out.families) family.push_back(carrier);
    out.saturated = true;
    out.bound = r.is_infinite() ? Distance::infinity() : Distance(brick_constant(d) * r.ceil());
    return out;
  }
  const auto* table = carrier.space().coordinates();
  if (table == nullptr || !table->is_plain()) {
    throw InvalidSpace("brick cover needs an integer coordinate space without weights or wrapping");
  }
  for (const auto a : axes) {
    if (a >= table->dims) throw std::invalid_argument("brick axis " + std::to_string(a) + " out of range");
  }
  const std::int64_t rho = r.ceil();
  out.bound = Distance(brick_constant(d) * rho);
  if (rho == 0) {
    // distinct points are at distance > 0: singletons are 0-disjoint
    for (auto& family : out.families) {
      for (const auto p : carrier) family.emplace_back(carrier.space(), std::vector<PointId>{p});
    }
    return out;
  }
  const std::int64_t period = static_cast<std::int64_t>(d + 2) * rho + 1;
  const std::int64_t good = static_cast<std::int64_t>(d + 1) * rho;
  for (std::size_t j = 0; j < grids; ++j) {
    const std::int64_t shift = static_cast<std::int64_t>(j) * rho;
    std::map<std::vector<std::int64_t>, std::vector<PointId>> cells;
    std::vector<std::int64_t> key(d);
    for (const auto p : carrier) {
      const auto row = table->row(p);
      bool inside = true;
      for (std::size_t a = 0; a < d && inside; ++a) {
        const auto v = row[axes[a]] - shift;
        auto q = v / period;
        auto o = v % period;
        if (o < 0) {
          o += period;
          --q;
        }
        inside = o <= good;
        key[a] = q;
      }
      if (inside) cells[key].push_back(p);
    }
    for (auto& [k, ids] : cells) out.families[j].emplace_back(carrier.space(), std::move(ids));
  }
  return out;
}

}  // namespace

KFamilyCover brick_cover(const PointSubset& carrier, const Distance& r, std::span<const std::size_t> axes) {
  auto out = grid_bricks(carrier, r, axes, axes.size() + 1);
  out.n = static_cast<int>(axes.size());
  return out;
}

KFamilyCover interval_cover(const PointSubset& carrier, const Distance& r, int k, std::size_t axis) {
  if (k < 2 || k > 3) throw std::invalid_argument("interval cover supports k = 2 or k = 3");
  const std::size_t axes[] = {axis};
  auto out = grid_bricks(carrier, r, axes, static_cast<std::size_t>(k));
  out.n = 1;
  return out;
}

SpaceDecomposer interval_decomposer(int k) {
  if (k < 2 || k > 3) throw std::invalid_argument("interval decomposer supports k = 2 or k = 3");
  SpaceDecomposer out;
  out.name = "interval";
  out.n = 1;
  out.k = k;
  out.bound = [](const Distance& r) { return r.is_infinite() ? Distance::infinity() : Distance(2 * r.ceil()); };
  out.decompose = [k](const PointSubset& carrier, const Distance& r) {
    if (const auto* t = carrier.space().coordinates(); t != nullptr && t->dims != 1) {
      throw InvalidSpace("interval decomposer applied to a " + std::to_string(t->dims) + "-dimensional space");
    }
    return interval_cover(carrier, r, k, 0);
  };
  return out;
}

SpaceDecomposer brick_decomposer(std::size_t d) {
  SpaceDecomposer out;
  out.name = "brick:" + std::to_string(d);
  out.n = static_cast<int>(d);
  out.k = static_cast<int>(d) + 1;
  out.bound = [d](const Distance& r) {
    return r.is_infinite() ? Distance::infinity() : Distance(brick_constant(d) * r.ceil());
  };
  out.decompose = [d](const PointSubset& carrier, const Distance& r) {
    std::vector<std::size_t> axes(d);
    std::iota(axes.begin(), axes.end(), std::size_t{0});
    if (const auto* t = carrier.space().coordinates(); t != nullptr && t->dims != d) {
      throw InvalidSpace("brick:" + std::to_string(d) + " applied to a " + std::to_string(t->dims) +
                         "-dimensional coordinate space");
    }
    return brick_cover(carrier, r, axes);
  };
  return out;
}

FiberDecomposer fiber_brick_decomposer(std::size_t m) {
  FiberDecomposer out;
  out.name = "brick:" + std::to_string(m);
  out.m = static_cast<int>(m);
  out.k = static_cast<int>(m) + 1;
  out.bound = [m](const Distance& r_x, const Distance& big_r_y) {
    if (r_x.is_infinite()) return Distance::infinity();
    return Distance(brick_constant(m) * r_x.ceil()) + big_r_y;
  };
  out.decompose = [m, bound = out.bound](const ScaleFunction&, const PointSubset& a, const Distance& r_x,
                                         const Distance& big_r_y) {
    const auto* t = a.space().coordinates();
    std::vector<std::size_t> axes;
    if (t != nullptr) {
      if (t->dims < m) throw InvalidSpace("fiber brick:" + std::to_string(m) + " needs at least m coordinates");
      for (std::size_t i = t->dims - m; i < t->dims; ++i) axes.push_back(i);
    } else {
      axes.resize(m);
    }
    auto cover = brick_cover(a, r_x, axes);
    cover.bound = bound(r_x, big_r_y);
    return cover;
  };
  return out;
}

namespace {

std::size_t parse_brick(std::string_view spec) {
  constexpr std::string_view prefix = "brick:";
  if (spec.substr(0, prefix.size()) != prefix) {
    throw std::invalid_argument("unknown decomposer '" + std::string(spec) + "' (expected brick:<d> or interval)");
  }
  const auto body = spec.substr(prefix.size());
  std::size_t d = 0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), d);
  if (ec != std::errc{} || ptr != body.data() + body.size() || d == 0) {
    throw std::invalid_argument("bad decomposer dimension in '" + std::string(spec) + "'");
  }
  return d;
}

}  // namespace

std::size_t decomposer_dimension(std::string_view spec) { return spec == "interval" ? 1 : parse_brick(spec); }

SpaceDecomposer make_space_decomposer(std::string_view spec, int k) {
  if (spec == "interval") {
    if (k <= 3) return interval_decomposer(k);
    throw std::invalid_argument("interval decomposer supports at most 3 families");
  }
  return tower_decomposer(brick_decomposer(parse_brick(spec)), k);
}

FiberDecomposer make_fiber_decomposer(std::string_view spec, int k) {
  return fiber_ostrand_expand(fiber_brick_decomposer(parse_brick(spec)), k);
}

SegmentsSpace segments_space(int n_max, const Limits& limits) {
  if (n_max < 1) throw std::invalid_argument("segments space needs N >= 1");
  if (n_max > 61) throw std::invalid_argument("segments space base points 2^N overflow for N > 61");
  CoordinateTable tx;
  tx.dims = 2;
  CoordinateTable ty;
  ty.dims = 1;
  std::vector<PointId> map;
  for (int n = 1; n <= n_max; ++n) {
    const std::int64_t base = std::int64_t{1} << n;
    ty.values.push_back(base);
    for (int j = 0; j <= n; ++j) {
      tx.values.push_back(base);
      tx.values.push_back(j);
      map.push_back(static_cast<PointId>(n - 1));
    }
  }
  check_cap(map.size(), limits, "segments space");
  SegmentsSpace out;
  out.x = FiniteMetricSpace::from_coordinates(std::move(tx), {}, {}, limits);
  out.y = FiniteMetricSpace::from_coordinates(std::move(ty), {}, {}, limits);
  out.f = ScaleFunction(out.x, out.y, std::move(map));
  return out;
}

std::int64_t cyclic_cost(std::int64_t n, std::int64_t x) noexcept {
  x %= n;
  if (x < 0) x += n;
  return n * std::min(x, n - x);
}

FiniteMetricSpace torsion_sum_space(int n_max, std::int64_t cutoff, const Limits& limits) {
  if (n_max < 2) throw std::invalid_argument("torsion sum needs N >= 2");
  if (cutoff < 0) throw std::invalid_argument("torsion sum needs cutoff >= 0");
  CoordinateTable t;
  t.norm = Norm::kL1;
  for (int n = 2; n <= n_max; ++n) {
    t.moduli.push_back(n);
    t.weights.push_back(n);
  }
  t.dims = t.moduli.size();
  t.values = cyclic_ball(t.moduli, t.weights, cutoff, limits, "torsion sum truncation");
  return FiniteMetricSpace::from_coordinates(std::move(t), {}, {}, limits);
}

std::int64_t default_tower_rule(int n) { return n + 1; }

TowerParams tower_params(int n_max, const TowerRule& rule) {
  if (n_max < 1) throw std::invalid_argument("tower needs N >= 1");
  TowerParams p;
  std::int64_t sum = 0;  // sum_{i<=n} 4 i t(i) r(i)
  for (int n = 1; n <= n_max; ++n) {
    const auto r = rule(n);
    if (r < 1) throw std::invalid_argument("tower rule must give r(n) >= 1");
    const auto t = n == 1 ? std::int64_t{1} : checked_add(1, sum);
    p.r.push_back(r);
    p.s.push_back(checked_mul(8 * n, r));
    p.t.push_back(t);
    sum = checked_add(sum, checked_mul(checked_mul(4 * n, t), r));
  }
  return p;
}

FiniteMetricSpace nowak_tower_space(int n_max, std::int64_t cutoff, const TowerParams& params, const Limits& limits) {
  if (n_max < 1 || static_cast<std::size_t>(n_max) > params.t.size()) {
    throw std::invalid_argument("tower parameters do not cover N=" + std::to_string(n_max));
  }
  CoordinateTable t;
  t.norm = Norm::kL1;
  for (int n = 1; n <= n_max; ++n) {
    for (int c = 0; c <= n; ++c) {
      t.moduli.push_back(params.s[n - 1]);
      t.weights.push_back(params.t[n - 1]);
    }
  }
  t.dims = t.moduli.size();
  t.values = cyclic_ball(t.moduli, t.weights, cutoff, limits, "tower truncation");
  return FiniteMetricSpace::from_coordinates(std::move(t), {}, {}, limits);
}

std::int64_t truncation_norm(const FiniteMetricSpace& space, PointId p) {
  const auto* t = space.coordinates();
  if (t == nullptr) throw InvalidSpace("truncation norm needs a coordinate space");
  std::int64_t acc = 0;
  const auto row = t->row(p);
  for (std::size_t a = 0; a < t->dims; ++a) acc += t->axis_gap(a, row[a], 0);
  return acc;
}

}  // namespace coarsedim
