#include "coarsedim/function_dim.hpp"

#include <algorithm>

namespace coarsedim {

namespace {

Rational power_of_three(int e) {
  Rational out(1);
  for (int i = 0; i < e; ++i) out *= Rational(3);
  return out;
}

}  // namespace

FiberDecomposer fiber_ostrand_expand(FiberDecomposer inner, int k) {
  if (k == inner.k) return inner;
  if (k < inner.k) {
    throw std::invalid_argument("fiber expansion cannot reduce " + std::to_string(inner.k) + " parts to " +
                                std::to_string(k));
  }
  const int steps = k - inner.k;
  FiberDecomposer out;
  out.name = inner.name + "^" + std::to_string(k);
  out.m = inner.m;
  out.k = k;
  out.bound = [model = inner.bound, steps](const Distance& r_x, const Distance& big_r_y) {
    // D^{(j+1)}(r, R) = D^{(j)}(3r, R) + 2r, unrolled
    Distance acc(0);
    Rational factor(1);
    for (int i = 0; i < steps; ++i) {
      acc += Rational(2) * factor * r_x;
      factor *= Rational(3);
    }
    return model(factor * r_x, big_r_y) + acc;
  };
  out.decompose = [in = std::move(inner), steps](const ScaleFunction& f, const PointSubset& a, const Distance& r_x,
                                                const Distance& big_r_y) {
    Rational factor = power_of_three(steps);
    auto cover = in.decompose(f, a, factor * r_x, big_r_y);
    for (int i = 0; i < steps; ++i) {
      factor /= Rational(3);
      cover = ostrand_expand(cover, factor * r_x);
    }
    return cover;
  };
  return out;
}

PullbackCover pullback_cover(const ScaleFunction& f, const PointSubset& b, const Distance& r_x, const Distance& r_y,
                             const Distance& big_r_y, const FiberDecomposer& fiber) {
  const auto comps = r_components(b, r_y);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps.diameters[i] > big_r_y) {
      throw PreconditionFailure("pullback: an r_Y-component of B has diameter " + comps.diameters[i].str() + " > " +
                                big_r_y.str());
    }
  }
  PullbackCover out;
  out.carrier = f.preimage(b);
  out.m = fiber.m;
  out.bound = fiber.bound(r_x, big_r_y);
  const auto k = static_cast<std::size_t>(fiber.k);
  std::vector<std::vector<PointId>> parts(k);
  for (const auto& s : comps.blocks) {
    const auto pre = f.preimage(s);
    if (pre.empty()) continue;
    ++out.pieces;
    const auto cover = fiber.decompose(f, pre, r_x, big_r_y);
    if (cover.k() != k || !(cover.carrier == pre)) {
      throw PreconditionFailure("pullback: fiber decomposer '" + fiber.name + "' returned a malformed cover");
    }
    const auto report = verify_kcover(cover, 1);
    if (!report.ok()) {
      throw PreconditionFailure("pullback: fiber decomposer '" + fiber.name + "' returned an invalid cover: " +
                                report.violations.front().message);
    }
    for (std::size_t j = 0; j < k; ++j) {
      for (const auto& set : cover.families[j]) parts[j].insert(parts[j].end(), set.begin(), set.end());
    }
  }
  std::vector<std::uint32_t> count(f.domain().size(), 0);
  out.ok = true;
  for (auto& ids : parts) {
    out.parts.emplace_back(f.domain(), std::move(ids));
    for (const auto p : out.parts.back()) ++count[p];
    const auto dc = double_components(f, out.parts.back(), r_x, r_y);
    Distance ox(0);
    Distance oy(0);
    for (std::size_t i = 0; i < dc.size(); ++i) {
      ox = max(ox, dc.diameters[i]);
      oy = max(oy, dc.image_diameters[i]);
    }
    out.observed_x.push_back(ox);
    out.observed_y.push_back(oy);
    out.ok = out.ok && ox <= out.bound && oy <= big_r_y;
  }
  out.min_multiplicity = out.carrier.empty() ? 0 : SIZE_MAX;
  for (const auto p : out.carrier) out.min_multiplicity = std::min<std::size_t>(out.min_multiplicity, count[p]);
  out.ok = out.ok && (out.carrier.empty() || out.min_multiplicity >= k - static_cast<std::size_t>(fiber.m));
  return out;
}

CascadeParams cascade_params(const Distance& r, int n, const Distance& c_f, const BoundModel& d_y,
                             const FiberBoundModel& d_f, Padding padding) {
  if (n < 0) throw std::invalid_argument("cascade needs n >= 0");
  CascadeParams p;
  p.n = n;
  p.r = r;
  p.c_f_raw = c_f;
  p.padding = padding;
  const bool always = padding == Padding::kAlways;

  p.c_f = c_f;
  if (always || !(c_f > r)) {
    p.c_f = c_f + r;
    p.padded.push_back("c_f(" + r.str() + ")=" + c_f.str() + " -> " + p.c_f.str());
  }
  const auto levels = static_cast<std::size_t>(n) + 2;
  p.r_y.resize(levels);
  p.big_r_y.resize(levels);
  p.r_x.resize(levels);
  p.big_r_x.resize(levels);

  auto eval_y = [&](const Distance& s) {
    auto v = d_y(s);
    if (always || !(v > s)) {
      const auto padded = v + s;
      p.padded.push_back("D_Y(" + s.str() + ")=" + v.str() + " -> " + padded.str());
      v = padded;
    }
    return v;
  };
  auto eval_f = [&](const Distance& s, const Distance& big) {
    auto v = d_f(s, big);
    if (always || !(v > s + big)) {
      const auto padded = v + s + big;
      p.padded.push_back("D_f(" + s.str() + "," + big.str() + ")=" + v.str() + " -> " + padded.str());
      v = padded;
    }
    return v;
  };

  const auto top = static_cast<std::size_t>(n) + 1;
  p.r_y[top] = p.c_f;
  for (std::size_t i = top + 1; i-- > 0;) {
    if (i < top) p.r_y[i] = Rational(3) * p.big_r_y[i + 1];
    p.big_r_y[i] = eval_y(p.r_y[i]);
  }
  p.r_x[top] = r;
  for (std::size_t i = top; i >= 1; --i) {
    if (i < top) p.r_x[i] = Rational(3) * p.big_r_x[i + 1];
    p.big_r_x[i] = eval_f(p.r_x[i], p.big_r_y[i]);
  }
  return p;
}

bool HurewiczResult::ok() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
}

namespace {

PointSubset union_of(const FiniteMetricSpace& space, const std::vector<PointSubset>& sets) {
  std::vector<PointId> ids;
  for (const auto& s : sets) ids.insert(ids.end(), s.begin(), s.end());
  return {space, std::move(ids)};
}

void require_cover(const KFamilyCover& cover, const std::string& what) {
  const auto report = verify_kcover(cover, 1);
  if (!report.ok()) {
    throw PreconditionFailure(what + " returned an invalid cover: " + report.violations.front().message);
  }
}

}  // namespace

HurewiczResult hurewicz_combine(const ScaleFunction& f, const Distance& r, const SpaceDecomposer& base,
                                const FiberDecomposer& fiber, Padding padding) {
  const int n = base.n;
  const int m = fiber.m;
  const int k = m + n + 1;
  if (base.k != k || fiber.k != k) {
    throw std::invalid_argument("hurewicz needs k = m + n + 1 = " + std::to_string(k) + " families from both " +
                                "decomposers, got " + std::to_string(base.k) + " and " + std::to_string(fiber.k));
  }
  HurewiczResult out;
  const auto& x = f.domain();
  const auto& y = f.codomain();
  out.cascade = cascade_params(r, n, coarseness(f, r), base.bound, fiber.bound, padding);
  const auto& cp = out.cascade;
  out.guaranteed = cp.guaranteed();
  const auto top = static_cast<std::size_t>(n) + 1;

  // A_1..A_{n+1}: the first n+1 families of a cover of Y at scale r^{(0)}_Y
  const auto y_cover = base.decompose(PointSubset::all(y), cp.r_y[0]);
  require_cover(y_cover, "base decomposer '" + base.name + "'");
  out.saturated = y_cover.saturated;
  std::vector<PointSubset> a(top + 1);
  for (std::size_t i = 1; i <= top; ++i) a[i] = union_of(y, y_cover.families[i - 1]);

  const auto kk = static_cast<std::size_t>(k);
  std::vector<std::vector<PointId>> d_parts(kk);
  std::vector<GlueLevel> glue;
  bool levels_ok = true;
  std::string levels_detail;
  std::size_t kolmogorov_failures = 0;

  for (std::size_t i = 1; i <= top; ++i) {
    const auto u_cover = base.decompose(a[i], cp.r_y[i]);
    require_cover(u_cover, "base decomposer '" + base.name + "'");
    out.saturated = out.saturated || u_cover.saturated;
    std::vector<PointSubset> u(kk);
    for (std::size_t j = 0; j < kk; ++j) u[j] = union_of(y, u_cover.families[j]);

    const auto b = pullback_cover(f, a[i], cp.r_x[i], cp.r_y[i], cp.big_r_y[0], fiber);
    if (!b.ok) {
      levels_ok = false;
      levels_detail += "pullback at level " + std::to_string(i) + " failed its own check; ";
    }

    // Kolmogorov: some j has x in B_i^j and f(x) in U_i^j
    std::vector<std::uint64_t> mask(x.size(), 0);
    for (std::size_t j = 0; j < kk; ++j) {
      for (const auto p : b.parts[j]) mask[p] |= std::uint64_t{1} << j;
    }
    for (const auto p : b.carrier) {
      bool hit = false;
      for (std::size_t j = 0; j < kk && !hit; ++j) hit = ((mask[p] >> j) & 1U) != 0 && u[j].contains(f(p));
      if (!hit) ++kolmogorov_failures;
    }

    for (std::size_t j = 0; j < kk; ++j) {
      const auto dij = b.parts[j].intersect(f.preimage(u[j]));
      const auto dc = double_components(f, dij, cp.r_x[i], cp.r_y[i]);
      for (std::size_t c = 0; c < dc.size(); ++c) {
        if (dc.diameters[c] > cp.big_r_x[i] || dc.image_diameters[c] > cp.big_r_y[i]) {
          levels_ok = false;
          levels_detail += "D_" + std::to_string(i) + "^" + std::to_string(j + 1) + " has a component of size (" +
                           dc.diameters[c].str() + "," + dc.image_diameters[c].str() + "); ";
          break;
        }
      }
      d_parts[j].insert(d_parts[j].end(), dij.begin(), dij.end());
    }
    glue.push_back({cp.r_x[i], cp.r_y[i], cp.big_r_x[i], cp.big_r_y[i]});
  }

  out.checks.push_back({"level_bounds", levels_ok,
                        levels_ok ? "every D_i^j has (r_i)-components within (R_i)" : levels_detail});

  for (auto& ids : d_parts) out.parts.emplace_back(x, std::move(ids));
  const auto covered = union_of(x, out.parts);
  out.checks.push_back({"kolmogorov", kolmogorov_failures == 0 && covered.size() == x.size(),
                        std::to_string(kolmogorov_failures) + " points without a common index; " +
                            std::to_string(x.size() - covered.size()) + " points uncovered"});

  const auto glued = union_glue_bound(glue);
  const auto gx = Rational(3) * cp.big_r_x[1];
  const auto gy = Rational(3) * cp.big_r_y[1];
  bool glue_ok = glued.valid && glued.bound_x <= gx && glued.bound_y <= gy;
  std::string glue_detail = glued.valid ? "gap conditions hold" : "gap condition fails at level " +
                                                                      std::to_string(glued.first_violation);
  bool coincide_ok = true;
  out.cover.carrier = PointSubset::all(x);
  out.cover.scale = r;
  out.cover.bound = out.guaranteed;
  out.cover.n = k - 1;
  out.cover.saturated = out.saturated;
  out.observed = Distance(0);
  for (const auto& part : out.parts) {
    const auto dc = double_components(f, part, r, cp.c_f);
    for (std::size_t c = 0; c < dc.size(); ++c) {
      if (dc.diameters[c] > gx || dc.image_diameters[c] > gy) {
        glue_ok = false;
        glue_detail = "a glued component has size (" + dc.diameters[c].str() + "," + dc.image_diameters[c].str() +
                      ") beyond (" + gx.str() + "," + gy.str() + ")";
      }
    }
    const auto rc = r_components(part, r);
    if (rc.blocks != dc.blocks) coincide_ok = false;
    out.observed = max(out.observed, rc.max_diameter());
    out.cover.families.push_back(rc.blocks);
  }
  out.checks.push_back({"glue_bound", glue_ok, glue_detail});
  out.checks.push_back({"components_coincide", coincide_ok,
                        coincide_ok ? "(r, c_f(r))-components equal r-components"
                                   : "(r, c_f(r))-components differ from r-components"});
  out.cover_report = verify_kcover(out.cover);
  out.checks.push_back({"cover_verified", out.cover_report.ok(),
                        std::to_string(out.cover_report.total_violations) + " violations"});
  out.checks.push_back({"within_guarantee", out.observed <= out.guaranteed,
                        "observed " + out.observed.str() + " vs guaranteed " + out.guaranteed.str()});
  return out;
}

}  // namespace coarsedim
