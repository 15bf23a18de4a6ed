#include "coarsedim/dim_estimate.hpp"

#include <algorithm>
#include <numeric>

#include "coarsedim/components.hpp"

namespace coarsedim {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kDilation:
      return "dilation";
    case ModelKind::kLinear:
      return "linear";
    case ModelKind::kBivariate:
      return "bivariate";
    case ModelKind::kBivariateAffine:
      return "bivariate-affine";
    case ModelKind::kTabulated:
      return "tabulated";
    case ModelKind::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

std::string_view to_string(SampleMethod method) {
  return method == SampleMethod::kOracle ? "oracle" : "heuristic";
}

Distance ControlModel::evaluate(const Distance& r, const Distance& big_r) const {
  const auto& c = coefficients;
  switch (kind) {
    case ModelKind::kDilation:
      return c.at(0) * r;
    case ModelKind::kLinear:
      return c.at(0) * r + Distance(c.at(1));
    case ModelKind::kBivariate:
      return c.at(0) * r + c.at(1) * big_r;
    case ModelKind::kBivariateAffine:
      return c.at(0) * r + c.at(1) * big_r + Distance(c.at(2));
    case ModelKind::kTabulated: {
      if (table.empty()) return Distance::infinity();
      for (const auto& s : table) {
        if (r <= s.r) return s.bound;
      }
      return table.back().bound;
    }
    case ModelKind::kUnbounded:
      return Distance::infinity();
  }
  return Distance::infinity();
}

std::string ControlModel::describe() const {
  const auto& c = coefficients;
  switch (kind) {
    case ModelKind::kDilation:
      return c.at(0).str() + "*r";
    case ModelKind::kLinear:
      return c.at(0).str() + "*r + " + c.at(1).str();
    case ModelKind::kBivariate:
      return c.at(0).str() + "*r + " + c.at(1).str() + "*R";
    case ModelKind::kBivariateAffine:
      return c.at(0).str() + "*r + " + c.at(1).str() + "*R + " + c.at(2).str();
    case ModelKind::kTabulated:
      return "tabulated(" + std::to_string(table.size()) + " samples)";
    case ModelKind::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

std::vector<Rational> features(ModelKind kind, const ProfileSample& s) {
  const auto r = s.r.rational();
  const auto big = s.big_r_y ? s.big_r_y->rational() : Rational(0);
  switch (kind) {
    case ModelKind::kDilation:
      return {r};
    case ModelKind::kLinear:
      return {r, Rational(1)};
    case ModelKind::kBivariate:
      return {r, big};
    case ModelKind::kBivariateAffine:
      return {r, big, Rational(1)};
    default:
      return {};
  }
}

// Solves a square system in place; false when singular.
bool solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational>& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col].is_zero()) continue;
      const auto factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

struct Fit {
  std::vector<Rational> coefficients;
  Rational residual;
};

// Minimax relative error with nonnegative coefficients: minimize t subject to
// |x_i . p - y_i| <= t y_i and p >= 0, by enumerating vertices of the
// feasible polyhedron in (p, t).
std::optional<Fit> minimax_fit(ModelKind kind, std::span<const ProfileSample> samples) {
  const std::size_t d = features(kind, samples.front()).size();
  std::vector<std::vector<Rational>> rows;  // rows . (p, t) <= rhs
  std::vector<Rational> rhs;
  for (const auto& s : samples) {
    const auto x = features(kind, s);
    const auto y = s.bound.rational();
    std::vector<Rational> up(x);
    up.push_back(-y);
    rows.push_back(up);
    rhs.push_back(y);
    std::vector<Rational> down;
    for (const auto& v : x) down.push_back(-v);
    down.push_back(-y);
    rows.push_back(down);
    rhs.push_back(-y);
  }
  for (std::size_t j = 0; j <= d; ++j) {
    std::vector<Rational> e(d + 1, Rational(0));
    e[j] = Rational(-1);
    rows.push_back(e);
    rhs.push_back(Rational(0));
  }
  const std::size_t m = rows.size();
  const std::size_t vars = d + 1;
  std::optional<Fit> best;
  std::vector<std::size_t> pick(vars);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  while (true) {
    try {
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> b;
      for (const auto i : pick) {
        a.push_back(rows[i]);
        b.push_back(rhs[i]);
      }
      std::vector<Rational> z;
      if (solve(a, b, z)) {
        bool feasible = true;
        for (std::size_t i = 0; i < m && feasible; ++i) {
          Rational lhs(0);
          for (std::size_t j = 0; j < vars; ++j) lhs += rows[i][j] * z[j];
          feasible = lhs <= rhs[i];
        }
        if (feasible && (!best || z[d] < best->residual)) {
          best = Fit{std::vector<Rational>(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(d)), z[d]};
        }
      }
    } catch (const std::overflow_error&) {
      // vertex not representable in 64-bit rationals; skip it
    }
    // next combination
    std::size_t i = vars;
    while (i > 0 && pick[i - 1] == m - vars + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < vars; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

ControlModel tabulate(std::span<const ProfileSample> samples) {
  ControlModel model;
  model.kind = ModelKind::kTabulated;
  model.table.assign(samples.begin(), samples.end());
  std::stable_sort(model.table.begin(), model.table.end(),
                   [](const ProfileSample& a, const ProfileSample& b) { return a.r < b.r; });
  Distance running(0);
  for (auto& s : model.table) {
    running = max(running, s.bound);
    s.bound = running;
  }
  return model;
}

}  // namespace

std::optional<Rational> relative_residual(const ControlModel& model, std::span<const ProfileSample> samples) {
  Rational worst(0);
  for (const auto& s : samples) {
    const auto pred = model.evaluate(s.r, s.big_r_y.value_or(Distance(0)));
    if (s.bound.is_zero()) {
      if (!pred.is_zero()) return std::nullopt;
      continue;
    }
    if (pred.is_infinite()) return std::nullopt;
    const auto y = s.bound.rational();
    const auto p = pred.rational();
    const auto err = (p < y ? y - p : p - y) / y;
    worst = std::max(worst, err);
  }
  return worst;
}

ControlModel fit_control_model(std::span<const ProfileSample> samples, const FitOptions& options) {
  if (samples.size() < 2) throw std::invalid_argument("model fitting needs at least two samples");
  const bool spread = std::any_of(samples.begin(), samples.end(), [&](const ProfileSample& s) {
    return s.r != samples.front().r;
  });
  if (!spread) throw std::invalid_argument("model fitting needs samples at more than one scale");
  for (const auto& s : samples) {
    if (!s.r.is_rational() || !s.bound.is_rational() || (s.big_r_y && !s.big_r_y->is_rational())) {
      throw std::invalid_argument("model fitting needs finite rational samples");
    }
  }
  const bool bivariate = std::all_of(samples.begin(), samples.end(), [](const ProfileSample& s) {
    return s.big_r_y.has_value();
  });
  std::vector<ModelKind> order{ModelKind::kDilation, ModelKind::kLinear};
  if (bivariate) {
    order.push_back(ModelKind::kBivariate);
    order.push_back(ModelKind::kBivariateAffine);
  }
  for (const auto kind : order) {
    const auto fit = minimax_fit(kind, samples);
    if (!fit) continue;
    ControlModel model;
    model.kind = kind;
    model.coefficients = fit->coefficients;
    model.residual = relative_residual(model, samples);
    if (model.residual && *model.residual <= options.tolerance) return model;
  }
  auto model = tabulate(samples);
  model.residual = relative_residual(model, samples);
  return model;
}

namespace {

struct Canonical {
  std::string label;
  std::vector<std::int64_t> coords;
  std::string name;
  PointId id;
};

std::vector<PointId> canonical_order(const PointSubset& s) {
  const auto& space = s.space();
  const auto* table = space.coordinates();
  std::vector<Canonical> keys;
  keys.reserve(s.size());
  for (const auto p : s) {
    Canonical c{space.label(p), {}, space.name(p), p};
    if (table != nullptr) {
      const auto row = table->row(p);
      c.coords.assign(row.begin(), row.end());
    }
    keys.push_back(std::move(c));
  }
  std::sort(keys.begin(), keys.end(), [](const Canonical& a, const Canonical& b) {
    return std::tie(a.label, a.coords, a.name, a.id) < std::tie(b.label, b.coords, b.name, b.id);
  });
  std::vector<PointId> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(k.id);
  return out;
}

}  // namespace

Distance decomposition_bound(std::span<const PointSubset> parts, const Distance& r) {
  Distance best(0);
  for (const auto& part : parts) {
    if (!part.empty()) best = max(best, r_components(part, r).max_diameter());
  }
  return best;
}

Decomposition min_bound_oracle(const PointSubset& s, const Distance& r, int parts, const OracleOptions& options) {
  if (parts < 1) throw std::invalid_argument("oracle needs parts >= 1");
  if (s.size() > options.max_points) {
    throw CapExceeded("oracle limited to " + std::to_string(options.max_points) + " points, got " +
                      std::to_string(s.size()));
  }
  const std::size_t n = s.size();
  Decomposition out;
  out.parts.assign(static_cast<std::size_t>(parts), PointSubset::none(s.space()));
  out.bound = Distance(0);
  if (n == 0) return out;

  std::vector<Distance> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = s.space().distance(s[i], s[j]);
  }
  const auto parts_n = static_cast<std::size_t>(parts);

  // comp[i]: component id of point i within its class; comp_diam per id
  struct State {
    std::vector<int> color;
    std::vector<int> comp;
    std::vector<Distance> comp_diam;
    Distance cost;
  };
  State state{std::vector<int>(n, -1), std::vector<int>(n, -1), {}, Distance(0)};
  Distance best = Distance::infinity();
  std::vector<int> best_color;

  auto assign = [&](const State& from, std::size_t i, int c) {
    State next = from;
    next.color[i] = c;
    // components of class c touched by point i
    std::vector<int> touched;
    for (std::size_t j = 0; j < i; ++j) {
      if (from.color[j] == c && dist[i * n + j] <= r) {
        if (std::find(touched.begin(), touched.end(), from.comp[j]) == touched.end()) touched.push_back(from.comp[j]);
      }
    }
    const int id = static_cast<int>(next.comp_diam.size());
    next.comp_diam.push_back(Distance(0));
    next.comp[i] = id;
    std::vector<std::size_t> members{i};
    for (std::size_t j = 0; j < i; ++j) {
      if (from.color[j] == c && std::find(touched.begin(), touched.end(), from.comp[j]) != touched.end()) {
        next.comp[j] = id;
        members.push_back(j);
      }
    }
    Distance d(0);
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) d = max(d, dist[members[a] * n + members[b]]);
    }
    next.comp_diam[id] = d;
    next.cost = max(from.cost, d);
    return next;
  };

  auto search = [&](auto&& self, const State& st, std::size_t i, int used) -> void {
    if (!(st.cost < best)) return;
    if (i == n) {
      best = st.cost;
      best_color = st.color;
      return;
    }
    const int limit = std::min(used + 1, parts);
    for (int c = 0; c < limit; ++c) {
      const auto next = assign(st, i, c);
      self(self, next, i + 1, std::max(used, c + 1));
      if (best.is_zero()) return;
    }
  };
  search(search, state, 0, 0);

  std::vector<std::vector<PointId>> ids(parts_n);
  for (std::size_t i = 0; i < n; ++i) ids[static_cast<std::size_t>(best_color[i])].push_back(s[i]);
  for (std::size_t c = 0; c < parts_n; ++c) out.parts[c] = PointSubset(s.space(), std::move(ids[c]));
  out.bound = best;
  return out;
}

std::optional<Decomposition> ball_carve_decompose(const PointSubset& s, const Distance& r, int parts,
                                                  const Distance& bound) {
  if (parts < 1) throw std::invalid_argument("ball carving needs parts >= 1");
  const auto& space = s.space();
  const auto order = canonical_order(s);
  const auto parts_n = static_cast<std::size_t>(parts);
  // per class: components as member lists with diameters
  struct Component {
    std::vector<PointId> members;
    Distance diam;
  };
  std::vector<std::vector<Component>> classes(parts_n);
  for (const auto p : order) {
    bool placed = false;
    for (std::size_t c = 0; c < parts_n && !placed; ++c) {
      auto& comps = classes[c];
      std::vector<std::size_t> touched;
      for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        for (const auto q : comps[ci].members) {
          if (space.within(p, q, r)) {
            touched.push_back(ci);
            break;
          }
        }
      }
      Distance d(0);
      bool fits = true;
      for (const auto ci : touched) {
        d = max(d, comps[ci].diam);
        if (d > bound) {
          fits = false;
          break;
        }
      }
      // cross distances: p against everything, and across touched components
      for (std::size_t a = 0; a < touched.size() && fits; ++a) {
        for (const auto u : comps[touched[a]].members) {
          d = max(d, space.distance(p, u));
          if (d > bound) {
            fits = false;
            break;
          }
          for (std::size_t b = a + 1; b < touched.size() && fits; ++b) {
            for (const auto v : comps[touched[b]].members) {
              d = max(d, space.distance(u, v));
              if (d > bound) {
                fits = false;
                break;
              }
            }
          }
        }
      }
      if (!fits) continue;
      Component merged{{p}, d};
      for (auto it = touched.rbegin(); it != touched.rend(); ++it) {
        auto& src = comps[*it].members;
        merged.members.insert(merged.members.end(), src.begin(), src.end());
        comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(*it));
      }
      comps.push_back(std::move(merged));
      placed = true;
    }
    if (!placed) return std::nullopt;
  }
  Decomposition out;
  out.bound = Distance(0);
  for (auto& comps : classes) {
    std::vector<PointId> ids;
    for (auto& comp : comps) {
      ids.insert(ids.end(), comp.members.begin(), comp.members.end());
      out.bound = max(out.bound, comp.diam);
    }
    out.parts.emplace_back(space, std::move(ids));
  }
  return out;
}

Decomposition ball_carve_minimize(const PointSubset& s, const Distance& r, int parts) {
  if (s.empty()) {
    Decomposition out;
    out.bound = Distance(0);
    out.parts.assign(static_cast<std::size_t>(std::max(parts, 1)), PointSubset::none(s.space()));
    return out;
  }
  std::vector<Distance> candidates{Distance(0)};
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) candidates.push_back(s.space().distance(s[i], s[j]));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  auto best = ball_carve_decompose(s, r, parts, candidates[hi]);
  while (lo < hi) {
    const auto mid = lo + (hi - lo) / 2;
    if (auto d = ball_carve_decompose(s, r, parts, candidates[mid])) {
      if (!best || d->bound < best->bound) best = std::move(d);
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return *best;
}

std::vector<ProfileSample> control_profile(const PointSubset& s, std::span<const Distance> rs, int parts,
                                           const OracleOptions& options) {
  std::vector<ProfileSample> out;
  for (const auto& r : rs) {
    ProfileSample sample;
    sample.r = r;
    sample.parts = parts;
    if (parts == 1) {
      sample.bound = s.empty() ? Distance(0) : r_components(s, r).max_diameter();
      sample.method = SampleMethod::kOracle;
    } else if (s.size() <= options.max_points) {
      sample.bound = min_bound_oracle(s, r, parts, options).bound;
      sample.method = SampleMethod::kOracle;
    } else {
      sample.bound = ball_carve_minimize(s, r, parts).bound;
      sample.method = SampleMethod::kHeuristic;
    }
    out.push_back(sample);
  }
  return out;
}

}  // namespace coarsedim
