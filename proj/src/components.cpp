#include "coarsedim/components.hpp"

#include <algorithm>

#include "proximity.hpp"
#include "union_find.hpp"

namespace coarsedim {

ScaleFunction::ScaleFunction(FiniteMetricSpace domain, FiniteMetricSpace codomain, std::vector<PointId> map) {
  if (map.size() != domain.size()) {
    throw std::invalid_argument("map has " + std::to_string(map.size()) + " entries for a domain of " +
                                std::to_string(domain.size()) + " points");
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] >= codomain.size()) {
      throw std::invalid_argument("image of '" + domain.name(static_cast<PointId>(i)) + "' is not in the codomain");
    }
  }
  auto state = std::make_shared<State>();
  state->fiber_start.assign(codomain.size() + 1, 0);
  for (const auto y : map) ++state->fiber_start[y + 1];
  for (std::size_t y = 0; y < codomain.size(); ++y) state->fiber_start[y + 1] += state->fiber_start[y];
  state->fiber_points.resize(map.size());
  auto cursor = state->fiber_start;
  for (std::size_t i = 0; i < map.size(); ++i) state->fiber_points[cursor[map[i]]++] = static_cast<PointId>(i);
  state->domain = std::move(domain);
  state->codomain = std::move(codomain);
  state->map = std::move(map);
  state_ = std::move(state);
}

PointSubset ScaleFunction::image(const PointSubset& s) const {
  std::vector<PointId> out;
  out.reserve(s.size());
  for (const auto p : s) out.push_back(state_->map[p]);
  return {codomain(), std::move(out)};
}

std::span<const PointId> ScaleFunction::fiber(PointId y) const noexcept {
  const auto b = state_->fiber_start[y];
  const auto e = state_->fiber_start[y + 1];
  return {state_->fiber_points.data() + b, e - b};
}

PointSubset ScaleFunction::preimage(const PointSubset& b) const {
  std::vector<PointId> out;
  for (const auto y : b) {
    const auto f = fiber(y);
    out.insert(out.end(), f.begin(), f.end());
  }
  return {domain(), std::move(out)};
}

Distance ComponentPartition::max_diameter() const {
  Distance best(0);
  for (const auto& d : diameters) best = max(best, d);
  return best;
}

namespace {

std::vector<PointSubset> blocks_from_labels(const PointSubset& s, const std::vector<std::uint32_t>& labels) {
  std::uint32_t count = 0;
  for (const auto l : labels) count = std::max(count, l + 1);
  std::vector<std::vector<PointId>> ids(count);
  for (std::size_t i = 0; i < labels.size(); ++i) ids[labels[i]].push_back(s[i]);
  std::vector<PointSubset> out;
  out.reserve(count);
  for (auto& v : ids) out.emplace_back(s.space(), std::move(v));
  return out;
}

bool spans_whole(const PointSubset& s, const Distance& r) {
  if (r.is_infinite() || s.size() <= 1) return true;
  return diameter(s) <= r;
}

}  // namespace

std::vector<std::uint32_t> component_labels(const PointSubset& s, const Distance& r) {
  if (spans_whole(s, r)) return std::vector<std::uint32_t>(s.size(), 0);
  detail::UnionFind uf(s.size());
  detail::for_each_close_pair(s.space(), s.ids(), r, [&](std::size_t i, std::size_t j) {
    uf.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  });
  return uf.labels();
}

PointSubset component_of(const PointSubset& s, PointId p, const Distance& r) {
  const auto start = std::lower_bound(s.begin(), s.end(), p);
  if (start == s.end() || *start != p) throw std::invalid_argument("component_of: point is not in the subset");
  const detail::ProximityIndex index(s.space(), s.ids(), r);
  std::vector<char> seen(s.size(), 0);
  std::vector<std::size_t> queue{static_cast<std::size_t>(start - s.begin())};
  seen[queue.front()] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    index.for_each_near(s[queue[head]], [&](std::size_t pos) {
      if (seen[pos] == 0) {
        seen[pos] = 1;
        queue.push_back(pos);
      }
    });
  }
  std::vector<PointId> ids;
  ids.reserve(queue.size());
  for (const auto pos : queue) ids.push_back(s[pos]);
  return {s.space(), std::move(ids)};
}

ComponentPartition r_components(const PointSubset& s, const Distance& r) {
  ComponentPartition out;
  out.r_x = r;
  if (s.empty()) return out;
  out.blocks = blocks_from_labels(s, component_labels(s, r));
  out.diameters.reserve(out.blocks.size());
  for (const auto& b : out.blocks) out.diameters.push_back(diameter(b));
  return out;
}

ComponentPartition double_components(const ScaleFunction& f, const PointSubset& s, const Distance& r_x,
                                     const Distance& r_y) {
  ComponentPartition out;
  out.r_x = r_x;
  out.r_y = r_y;
  out.double_parameter = true;
  if (s.empty()) return out;

  const auto img = f.image(s);
  const bool x_free = spans_whole(s, r_x);
  const bool y_free = spans_whole(img, r_y);
  std::vector<std::uint32_t> labels;
  if (x_free && y_free) {
    labels.assign(s.size(), 0);
  } else if (y_free) {
    labels = component_labels(s, r_x);
  } else if (x_free) {
    // link through the image: points with equal image are linked, and so are
    // points whose images are r_y-close
    const auto ylabels = component_labels(img, r_y);
    detail::UnionFind uf(s.size());
    std::vector<std::uint32_t> first(ylabels.empty() ? 0 : *std::max_element(ylabels.begin(), ylabels.end()) + 1,
                                     UINT32_MAX);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto pos = static_cast<std::size_t>(std::lower_bound(img.begin(), img.end(), f(s[i])) - img.begin());
      auto& head = first[ylabels[pos]];
      if (head == UINT32_MAX) {
        head = static_cast<std::uint32_t>(i);
      } else {
        uf.unite(head, static_cast<std::uint32_t>(i));
      }
    }
    labels = uf.labels();
  } else {
    detail::UnionFind uf(s.size());
    const auto& codomain = f.codomain();
    detail::for_each_close_pair(s.space(), s.ids(), r_x, [&](std::size_t i, std::size_t j) {
      if (codomain.within(f(s[i]), f(s[j]), r_y)) {
        uf.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      }
    });
    labels = uf.labels();
  }
  out.blocks = blocks_from_labels(s, labels);
  for (const auto& b : out.blocks) {
    out.diameters.push_back(diameter(b));
    out.image_diameters.push_back(diameter(f.image(b)));
  }
  return out;
}

namespace {

struct CoarsenessScan {
  Distance value;
  std::optional<std::pair<PointId, PointId>> witness;
};

CoarsenessScan scan_coarseness(const ScaleFunction& f, const Distance& r) {
  CoarsenessScan out{Distance(0), std::nullopt};
  const auto all = PointSubset::all(f.domain());
  if (all.size() <= 1) return out;
  const auto& codomain = f.codomain();
  detail::for_each_close_pair(f.domain(), all.ids(), r, [&](std::size_t i, std::size_t j) {
    const auto fi = f(static_cast<PointId>(i));
    const auto fj = f(static_cast<PointId>(j));
    if (fi == fj) return;
    if (codomain.within(fi, fj, out.value)) return;
    out.value = codomain.distance(fi, fj);
    out.witness = std::make_pair(static_cast<PointId>(i), static_cast<PointId>(j));
  });
  return out;
}

}  // namespace

Distance coarseness(const ScaleFunction& f, const Distance& r) {
  if (f.domain().size() > 1 && spans_whole(PointSubset::all(f.domain()), r)) {
    return diameter(f.image(PointSubset::all(f.domain())));
  }
  return scan_coarseness(f, r).value;
}

std::vector<std::pair<Distance, Distance>> coarseness_profile(const ScaleFunction& f, std::span<const Distance> rs) {
  if (rs.empty()) throw std::invalid_argument("coarseness profile needs at least one scale");
  std::vector<std::pair<Distance, Distance>> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.emplace_back(r, coarseness(f, r));
  return out;
}

std::optional<std::pair<PointId, PointId>> coarseness_witness(const ScaleFunction& f, const Distance& r) {
  return scan_coarseness(f, r).witness;
}

DoubleControlReport check_double_control(const ScaleFunction& f, const PointSubset& b, const PointSubset& a,
                                         const Distance& r_x, const Distance& r_y, const Distance& big_r_x,
                                         const Distance& big_r_y) {
  DoubleControlReport report;
  const auto bx = r_components(b, r_x);
  for (std::size_t i = 0; i < bx.size(); ++i) {
    if (bx.diameters[i] > big_r_x) {
      report.precondition_ok = false;
      report.precondition_failure = "an r_X-component of B has diameter " + bx.diameters[i].str() + " > " +
                                    big_r_x.str();
      report.precondition_witness = bx.blocks[i];
      return report;
    }
  }
  const auto ay = r_components(a, r_y);
  for (std::size_t i = 0; i < ay.size(); ++i) {
    if (ay.diameters[i] > big_r_y) {
      report.precondition_ok = false;
      report.precondition_failure = "an r_Y-component of A has diameter " + ay.diameters[i].str() + " > " +
                                    big_r_y.str();
      report.precondition_witness = ay.blocks[i];
      return report;
    }
  }
  const auto target = b.intersect(f.preimage(a));
  report.components = double_components(f, target, r_x, r_y);
  for (std::size_t i = 0; i < report.components.size(); ++i) {
    if (report.components.diameters[i] > big_r_x || report.components.image_diameters[i] > big_r_y) {
      report.violations.push_back(i);
    }
  }
  return report;
}

GlueResult union_glue_bound(std::span<const GlueLevel> levels) {
  GlueResult out;
  if (levels.empty()) return out;
  const auto gap_ok = [](const Distance& big, const Distance& small, const Distance& coarse) {
    if (coarse.is_infinite()) return true;
    if (big.is_infinite() || small.is_infinite()) return false;
    return big + Rational(2) * small < coarse;
  };
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const auto& coarse = levels[i];
    const auto& fine = levels[i + 1];
    if (!gap_ok(fine.big_r_x, fine.r_x, coarse.r_x) || !gap_ok(fine.big_r_y, fine.r_y, coarse.r_y)) {
      out.first_violation = i + 1;
      return out;
    }
  }
  out.valid = true;
  out.bound_x = levels.front().big_r_x + Rational(2) * levels.front().r_x;
  out.bound_y = levels.front().big_r_y + Rational(2) * levels.front().r_y;
  return out;
}

}  // namespace coarsedim
