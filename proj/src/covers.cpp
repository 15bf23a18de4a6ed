#include "coarsedim/covers.hpp"

#include <algorithm>
#include <map>

#include "coarsedim/components.hpp"
#include "proximity.hpp"

namespace coarsedim {

std::string_view to_string(CoverViolation::Kind kind) {
  switch (kind) {
    case CoverViolation::Kind::kClosePair:
      return "close_pair";
    case CoverViolation::Kind::kOversized:
      return "oversized";
    case CoverViolation::Kind::kUndercovered:
      return "undercovered";
    case CoverViolation::Kind::kOutsideCarrier:
      return "outside_carrier";
    case CoverViolation::Kind::kMalformed:
      return "malformed";
  }
  return "unknown";
}

namespace {

std::pair<PointId, PointId> farthest_pair(const PointSubset& s) {
  std::pair<PointId, PointId> best{s[0], s[0]};
  Distance d(0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const auto v = s.space().distance(s[i], s[j]);
      if (d < v) {
        d = v;
        best = {s[i], s[j]};
      }
    }
  }
  return best;
}

}  // namespace

CoverReport verify_kcover(const KFamilyCover& cover, std::size_t max_listed) {
  CoverReport report;
  report.observed_bound = Distance(0);
  const auto& space = cover.space();
  auto add = [&](CoverViolation v) {
    ++report.total_violations;
    if (report.violations.size() < max_listed) report.violations.push_back(std::move(v));
  };

  if (cover.n < 0 || cover.multiplicity() < 1) {
    CoverViolation v;
    v.message = "need k >= n + 1, got k=" + std::to_string(cover.k()) + " n=" + std::to_string(cover.n);
    add(std::move(v));
  }

  std::vector<std::uint32_t> count(space.size(), 0);
  for (std::size_t fi = 0; fi < cover.families.size(); ++fi) {
    const auto& family = cover.families[fi];
    // (point, set) incidences of this family
    std::vector<std::pair<PointId, std::uint32_t>> members;
    for (std::size_t si = 0; si < family.size(); ++si) {
      const auto& set = family[si];
      if (!set.space().same_as(space)) {
        CoverViolation v;
        v.family = fi;
        v.set_a = si;
        v.message = "set belongs to a different space";
        add(std::move(v));
        continue;
      }
      for (const auto p : set) {
        members.emplace_back(p, static_cast<std::uint32_t>(si));
        ++count[p];
        if (!cover.carrier.contains(p)) {
          CoverViolation v;
          v.kind = CoverViolation::Kind::kOutsideCarrier;
          v.family = fi;
          v.set_a = si;
          v.p = p;
          v.message = "point " + space.name(p) + " is outside the carrier";
          add(std::move(v));
        }
      }
      if (set.empty()) continue;
      const auto d = diameter(set);
      report.observed_bound = max(report.observed_bound, d);
      if (d > cover.bound) {
        const auto [p, q] = farthest_pair(set);
        CoverViolation v;
        v.kind = CoverViolation::Kind::kOversized;
        v.family = fi;
        v.set_a = si;
        v.p = p;
        v.q = q;
        v.value = d;
        v.message = "set diameter " + d.str() + " exceeds bound " + cover.bound.str();
        add(std::move(v));
      }
    }
    std::sort(members.begin(), members.end());
    std::vector<PointId> points;
    std::vector<std::uint32_t> owner;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0 && members[i].first == members[i - 1].first) {
        CoverViolation v;
        v.kind = CoverViolation::Kind::kClosePair;
        v.family = fi;
        v.set_a = members[i - 1].second;
        v.set_b = members[i].second;
        v.p = v.q = members[i].first;
        v.value = Distance(0);
        v.message = "point " + space.name(v.p) + " lies in two sets of one family";
        add(std::move(v));
        continue;
      }
      points.push_back(members[i].first);
      owner.push_back(members[i].second);
    }
    detail::for_each_close_pair(space, points, cover.scale, [&](std::size_t i, std::size_t j) {
      if (owner[i] == owner[j]) return;
      CoverViolation v;
      v.kind = CoverViolation::Kind::kClosePair;
      v.family = fi;
      v.set_a = std::min(owner[i], owner[j]);
      v.set_b = std::max(owner[i], owner[j]);
      v.p = points[i];
      v.q = points[j];
      v.value = space.distance(points[i], points[j]);
      v.message = "points " + space.name(v.p) + " and " + space.name(v.q) + " of different sets are at distance " +
                  v.value.str() + " <= " + cover.scale.str();
      add(std::move(v));
    });
  }

  const auto need = static_cast<std::uint32_t>(std::max(cover.multiplicity(), 0));
  report.min_multiplicity = cover.carrier.empty() ? 0 : SIZE_MAX;
  for (const auto p : cover.carrier) {
    report.min_multiplicity = std::min<std::size_t>(report.min_multiplicity, count[p]);
    if (count[p] < need) {
      CoverViolation v;
      v.kind = CoverViolation::Kind::kUndercovered;
      v.p = p;
      v.count = count[p];
      v.message = "point " + space.name(p) + " lies in " + std::to_string(count[p]) + " sets, needs " +
                  std::to_string(need);
      add(std::move(v));
    }
  }
  return report;
}

namespace {

void require_valid(const KFamilyCover& cover, const char* what) {
  const auto report = verify_kcover(cover, 1);
  if (!report.ok()) {
    throw PreconditionFailure(std::string(what) + ": input cover is invalid (" +
                              std::to_string(report.total_violations) + " violations; first: " +
                              report.violations.front().message + ")");
  }
}

}  // namespace

KFamilyCover ostrand_expand(const KFamilyCover& cover, const Distance& r) {
  if (cover.scale < Rational(3) * r) {
    throw PreconditionFailure("ostrand expansion at scale " + r.str() + " needs an input cover at scale >= " +
                              (Rational(3) * r).str() + ", got " + cover.scale.str());
  }
  require_valid(cover, "ostrand expansion");

  const auto& carrier = cover.carrier;
  const std::size_t k = cover.k();
  const std::size_t n_pts = carrier.size();
  auto position = [&](PointId p) {
    return static_cast<std::size_t>(std::lower_bound(carrier.begin(), carrier.end(), p) - carrier.begin());
  };

  // in_set[f][pos] / in_nbhd[f][pos]: index of the containing set or -1
  std::vector<std::vector<std::int32_t>> in_set(k, std::vector<std::int32_t>(n_pts, -1));
  std::vector<std::vector<std::int32_t>> in_nbhd(k, std::vector<std::int32_t>(n_pts, -1));
  const detail::ProximityIndex index(carrier.space(), carrier.ids(), r);

  KFamilyCover out;
  out.carrier = carrier;
  out.scale = r;
  out.bound = cover.bound + Rational(2) * r;
  out.n = cover.n;
  out.saturated = cover.saturated;
  out.families.resize(k + 1);

  for (std::size_t f = 0; f < k; ++f) {
    const auto& family = cover.families[f];
    for (std::size_t si = 0; si < family.size(); ++si) {
      std::vector<PointId> grown;
      for (const auto p : family[si]) {
        in_set[f][position(p)] = static_cast<std::int32_t>(si);
        index.for_each_near(p, [&](std::size_t pos) {
          if (in_nbhd[f][pos] != static_cast<std::int32_t>(si)) {
            in_nbhd[f][pos] = static_cast<std::int32_t>(si);
            grown.push_back(carrier[pos]);
          }
        });
      }
      if (!grown.empty()) out.families[f].emplace_back(carrier.space(), std::move(grown));
    }
  }

  const auto need = static_cast<std::size_t>(cover.multiplicity());
  using Key = std::pair<std::vector<std::uint32_t>, std::vector<std::int32_t>>;
  std::map<Key, std::vector<PointId>> extra;
  for (std::size_t pos = 0; pos < n_pts; ++pos) {
    Key key;
    std::size_t near = 0;
    for (std::size_t f = 0; f < k; ++f) {
      if (in_nbhd[f][pos] >= 0) ++near;
      if (in_set[f][pos] >= 0) {
        key.first.push_back(static_cast<std::uint32_t>(f));
        key.second.push_back(in_set[f][pos]);
      }
    }
    if (key.first.size() == need && near == need) extra[std::move(key)].push_back(carrier[pos]);
  }
  for (auto& [key, ids] : extra) out.families[k].emplace_back(carrier.space(), std::move(ids));
  return out;
}

Distance ostrand_bound(const BoundModel& base, int steps, const Distance& r) {
  if (steps <= 0) return base(r);
  return ostrand_bound(base, steps - 1, Rational(3) * r) + Rational(2) * r;
}

KFamilyCover ostrand_tower(const PointSubset& carrier, const SpaceDecomposer& base, int k, const Distance& r) {
  const int steps = k - base.n - 1;
  if (base.k != base.n + 1) {
    throw std::invalid_argument("ostrand tower needs an (n, n+1) base decomposer, '" + base.name + "' has k=" +
                                std::to_string(base.k));
  }
  if (steps < 0) {
    throw std::invalid_argument("ostrand tower needs k >= n + 1, got k=" + std::to_string(k) +
                                " n=" + std::to_string(base.n));
  }
  Rational factor(1);
  for (int i = 0; i < steps; ++i) factor *= Rational(3);
  auto cover = base.decompose(carrier, factor * r);
  if (cover.k() != static_cast<std::size_t>(base.n + 1) || cover.n != base.n) {
    throw PreconditionFailure("decomposer '" + base.name + "' returned " + std::to_string(cover.k()) +
                              " families with n=" + std::to_string(cover.n) + ", expected " +
                              std::to_string(base.n + 1) + " with n=" + std::to_string(base.n));
  }
  require_valid(cover, ("decomposer '" + base.name + "'").c_str());
  for (int i = steps; i > 0; --i) {
    factor /= Rational(3);
    cover = ostrand_expand(cover, factor * r);
  }
  return cover;
}

SpaceDecomposer tower_decomposer(SpaceDecomposer base, int k) {
  if (k == base.k) return base;
  if (k < base.n + 1) {
    throw std::invalid_argument("decomposer '" + base.name + "' cannot produce " + std::to_string(k) +
                                " families with n=" + std::to_string(base.n));
  }
  SpaceDecomposer out;
  out.name = base.name + "^" + std::to_string(k);
  out.n = base.n;
  out.k = k;
  const int steps = k - base.n - 1;
  out.bound = [model = base.bound, steps](const Distance& r) { return ostrand_bound(model, steps, r); };
  out.decompose = [b = std::move(base), k](const PointSubset& carrier, const Distance& r) {
    return ostrand_tower(carrier, b, k, r);
  };
  return out;
}

KFamilyCover product_cover(const KFamilyCover& x, const KFamilyCover& y, const Limits& limits) {
  if (x.k() != y.k()) {
    throw std::invalid_argument("product cover needs equal family counts, got " + std::to_string(x.k()) + " and " +
                                std::to_string(y.k()));
  }
  if (x.k() != static_cast<std::size_t>(x.n + y.n + 1)) {
    throw std::invalid_argument("product cover needs k = m + n + 1, got k=" + std::to_string(x.k()) +
                                " m=" + std::to_string(x.n) + " n=" + std::to_string(y.n));
  }
  if (x.scale != y.scale) {
    throw std::invalid_argument("product cover needs equal scales, got " + x.scale.str() + " and " +
                                y.scale.str());
  }
  const auto space = product_sum(x.space(), y.space(), limits);
  const auto ny = static_cast<PointId>(y.space().size());
  auto cross = [&](const PointSubset& u, const PointSubset& v) {
    std::vector<PointId> ids;
    ids.reserve(u.size() * v.size());
    for (const auto a : u) {
      for (const auto b : v) ids.push_back(a * ny + b);
    }
    return PointSubset(space, std::move(ids));
  };
  KFamilyCover out;
  out.carrier = cross(x.carrier, y.carrier);
  out.scale = x.scale;
  out.bound = x.bound + y.bound;
  out.n = static_cast<int>(x.k()) - 1;
  out.saturated = x.saturated && y.saturated;
  out.families.resize(x.k());
  for (std::size_t i = 0; i < x.k(); ++i) {
    for (const auto& u : x.families[i]) {
      for (const auto& v : y.families[i]) {
        if (!u.empty() && !v.empty()) out.families[i].push_back(cross(u, v));
      }
    }
  }
  return out;
}

TransferResult neighborhood_transfer(const PointSubset& a, const std::vector<PointSubset>& parts, const Distance& r,
                                     const Distance& big_r, const Distance& bound) {
  PointSubset joined = PointSubset::none(a.space());
  for (const auto& part : parts) {
    if (!part.is_subset_of(a)) throw PreconditionFailure("neighborhood transfer: a part is not contained in A");
    joined = joined.unite(part);
  }
  if (!(joined == a)) throw PreconditionFailure("neighborhood transfer: parts do not cover A");
  const auto coarse = r + Rational(2) * big_r;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto comps = r_components(parts[i], coarse);
    if (comps.max_diameter() > bound) {
      throw PreconditionFailure("neighborhood transfer: a " + coarse.str() + "-component of part " +
                                std::to_string(i + 1) + " has diameter " + comps.max_diameter().str() + " > " +
                                bound.str());
    }
  }
  TransferResult out;
  out.neighborhood = neighborhood(a, big_r);
  out.bound = bound + Rational(2) * big_r;
  PointSubset covered = PointSubset::none(a.space());
  for (const auto& part : parts) {
    out.parts.push_back(neighborhood(part, big_r, out.neighborhood));
    covered = covered.unite(out.parts.back());
    out.observed.push_back(r_components(out.parts.back(), r).max_diameter());
  }
  out.ok = covered == out.neighborhood &&
           std::all_of(out.observed.begin(), out.observed.end(), [&](const Distance& d) { return d <= out.bound; });
  return out;
}

}  // namespace coarsedim
