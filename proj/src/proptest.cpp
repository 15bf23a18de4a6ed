#include "coarsedim/proptest.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "coarsedim/components.hpp"
#include "coarsedim/covers.hpp"
#include "coarsedim/dim_estimate.hpp"
#include "coarsedim/gallery.hpp"

namespace coarsedim {

bool PropReport::ok() const noexcept {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.violations == 0; });
}

const std::vector<std::string>& proptest_suites() {
  static const std::vector<std::string> names{"coincidence", "double-control", "glue", "glue-chain", "neighborhood", "oracle"};
  return names;
}

namespace {

constexpr std::size_t kMaxFailures = 5;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::int64_t between(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin(int percent = 50) { return between(0, 99) < percent; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(between(0, static_cast<std::int64_t>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 gen_;
};

std::uint64_t case_seed(std::uint64_t seed, std::string_view suite, std::size_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (const auto c : suite) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  h ^= index * 0x9e3779b97f4a7c15ULL;
  h ^= h >> 31;
  return h * 0xbf58476d1ce4e5b9ULL;
}

// A random small space: line points, planar points under one of the three
// norms, or the path metric of a random connected weighted graph.
FiniteMetricSpace random_space(Rng& rng, std::size_t lo, std::size_t hi) {
  const auto n = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
  const auto kind = rng.between(0, 3);
  if (kind <= 1) {
    const std::size_t dims = kind == 0 ? 1 : 2;
    const auto span = rng.between(static_cast<std::int64_t>(n), static_cast<std::int64_t>(4 * n + 4));
    CoordinateTable t;
    t.dims = dims;
    t.norm = dims == 1 ? Norm::kL1 : rng.pick(std::vector<Norm>{Norm::kL1, Norm::kSup, Norm::kL2Squared});
    std::vector<std::vector<std::int64_t>> seen;
    while (seen.size() < n) {
      std::vector<std::int64_t> row(dims);
      for (auto& v : row) v = rng.between(0, dims == 1 ? span * 2 : span / 2 + 2);
      if (std::find(seen.begin(), seen.end(), row) == seen.end()) seen.push_back(row);
    }
    for (const auto& row : seen) t.values.insert(t.values.end(), row.begin(), row.end());
    return FiniteMetricSpace::from_coordinates(std::move(t));
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<FiniteMetricSpace::Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    const auto parent = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(i) - 1));
    edges.push_back({names[parent], names[i], Distance(rng.between(1, 6))});
  }
  const auto extra = rng.between(0, static_cast<std::int64_t>(n));
  for (std::int64_t e = 0; e < extra && n > 1; ++e) {
    const auto a = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(n) - 1));
    const auto b = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(n) - 1));
    if (a == b) continue;
    edges.push_back({names[a], names[b], rng.coin(25) ? Distance(Rational(rng.between(1, 11), 2))
                                                      : Distance(rng.between(1, 8))});
  }
  return FiniteMetricSpace::from_graph(std::move(names), std::move(edges));
}

ScaleFunction random_map(Rng& rng, const FiniteMetricSpace& x) {
  auto y = random_space(rng, 1, std::max<std::size_t>(2, x.size()));
  std::vector<PointId> map(x.size());
  for (auto& v : map) v = static_cast<PointId>(rng.between(0, static_cast<std::int64_t>(y.size()) - 1));
  return {x, y, std::move(map)};
}

PointSubset random_subset(Rng& rng, const FiniteMetricSpace& space, int percent) {
  std::vector<PointId> ids;
  for (PointId p = 0; p < space.size(); ++p) {
    if (rng.coin(percent)) ids.push_back(p);
  }
  return {space, std::move(ids)};
}

// A scale near the distances actually present: 0, a pairwise distance, a
// midpoint-ish rational, or infinity.
Distance random_scale(Rng& rng, const FiniteMetricSpace& space, bool allow_infinite) {
  if (allow_infinite && rng.coin(8)) return Distance::infinity();
  if (space.size() < 2 || rng.coin(10)) return Distance(rng.between(0, 3));
  const auto p = static_cast<PointId>(rng.between(0, static_cast<std::int64_t>(space.size()) - 1));
  const auto q = static_cast<PointId>(rng.between(0, static_cast<std::int64_t>(space.size()) - 1));
  const auto d = space.distance(p, q);
  if (!d.is_rational()) return Distance(d.floor());
  if (rng.coin(20)) return d + Distance(Rational(1, 2));
  return d;
}

// Brute-force double components: transitive closure of the link relation
// over a boolean matrix, with no union-find and no spatial indexing.
std::vector<std::vector<PointId>> closure_components(const ScaleFunction* f, const PointSubset& s,
                                                     const Distance& r_x, const Distance& r_y) {
  const auto n = s.size();
  std::vector<char> reach(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      bool link = i == j || s.space().distance(s[i], s[j]) <= r_x;
      if (link && f != nullptr && i != j) link = f->codomain().distance((*f)(s[i]), (*f)(s[j])) <= r_y;
      reach[i * n + j] = link ? 1 : 0;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k * n + j]) reach[i * n + j] = 1;
      }
    }
  }
  std::vector<std::vector<PointId>> out;
  std::vector<char> done(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    std::vector<PointId> block;
    for (std::size_t j = 0; j < n; ++j) {
      if (reach[i * n + j]) {
        done[j] = 1;
        block.push_back(s[j]);
      }
    }
    out.push_back(std::move(block));
  }
  return out;
}

std::vector<std::vector<PointId>> blocks_of(const ComponentPartition& p) {
  std::vector<std::vector<PointId>> out;
  for (const auto& b : p.blocks) out.emplace_back(b.begin(), b.end());
  return out;
}

Distance brute_diameter(const FiniteMetricSpace& space, const std::vector<PointId>& block) {
  Distance best(0);
  for (const auto a : block) {
    for (const auto b : block) best = max(best, space.distance(a, b));
  }
  return best;
}

Distance brute_image_diameter(const ScaleFunction& f, const std::vector<PointId>& block) {
  Distance best(0);
  for (const auto a : block) {
    for (const auto b : block) best = max(best, f.codomain().distance(f(a), f(b)));
  }
  return best;
}

// Largest (x, y) diameters of the closure components.
std::pair<Distance, Distance> brute_bounds(const ScaleFunction& f, const PointSubset& s, const Distance& r_x,
                                           const Distance& r_y) {
  Distance bx(0);
  Distance by(0);
  for (const auto& block : closure_components(&f, s, r_x, r_y)) {
    bx = max(bx, brute_diameter(f.domain(), block));
    by = max(by, brute_image_diameter(f, block));
  }
  return {bx, by};
}

class Case {
 public:
  explicit Case(std::size_t index) : index_(index) {}
  void check(bool cond, const std::string& what) {
    if (!cond && failure_.empty()) failure_ = "case " + std::to_string(index_) + ": " + what;
  }
  [[nodiscard]] bool failed() const noexcept { return !failure_.empty(); }
  [[nodiscard]] const std::string& failure() const noexcept { return failure_; }

 private:
  std::size_t index_;
  std::string failure_;
};

// Components at (r, c_f(r)) agree with r-components on every subset; a
// smaller second parameter splits the pair realizing c_f(r).
void coincidence(Rng& rng, Case& c) {
  const auto x = random_space(rng, 2, 10);
  const auto f = random_map(rng, x);
  const auto r = random_scale(rng, x, false);
  const auto cf = coarseness(f, r);
  Distance brute(0);
  for (PointId p = 0; p < x.size(); ++p) {
    for (PointId q = 0; q < x.size(); ++q) {
      if (x.distance(p, q) <= r) brute = max(brute, f.codomain().distance(f(p), f(q)));
    }
  }
  c.check(cf == brute, "coarseness " + cf.str() + " != brute force " + brute.str());
  for (int t = 0; t < 3; ++t) {
    const auto a = random_subset(rng, x, 70);
    const auto dbl = double_components(f, a, r, cf);
    const auto single = r_components(a, r);
    c.check(blocks_of(dbl) == blocks_of(single), "(r, c_f(r))-components differ from r-components");
    c.check(blocks_of(single) == closure_components(nullptr, a, r, Distance::infinity()),
            "r-components differ from the closure oracle");
  }
  if (cf.is_zero()) return;
  const auto witness = coarseness_witness(f, r);
  c.check(witness.has_value(), "no witness for positive c_f(r)");
  if (!witness) return;
  const PointSubset pair(x, {witness->first, witness->second});
  const auto image_gap = f.codomain().distance(f(witness->first), f(witness->second));
  c.check(image_gap == cf, "witness does not realize c_f(r)");
  const Distance g = cf.is_rational() && cf.rational() >= Rational(1) ? Distance(cf.rational() - Rational(1, 2))
                                                                       : Distance(0);
  if (!(g < cf)) return;
  c.check(double_components(f, pair, r, g).size() == 2, "a smaller second parameter did not split the witness pair");
  c.check(r_components(pair, r).size() == 1, "witness pair is not r-connected");
}

// (r_X, r_Y)-components of B intersected with f^{-1}(A) are (R_X, R_Y)-bounded.
void double_control(Rng& rng, Case& c) {
  const auto x = random_space(rng, 2, 10);
  const auto f = random_map(rng, x);
  const auto b = random_subset(rng, x, 75);
  const auto a = random_subset(rng, f.codomain(), 60);
  const auto r_x = random_scale(rng, x, true);
  const auto r_y = random_scale(rng, f.codomain(), true);
  const auto big_r_x = r_components(b, r_x).max_diameter();
  const auto big_r_y = r_components(a, r_y).max_diameter();
  const auto report = check_double_control(f, b, a, r_x, r_y, big_r_x, big_r_y);
  c.check(report.precondition_ok, "precondition rejected: " + report.precondition_failure);
  c.check(report.ok(), "a component exceeds (R_X, R_Y)");
  const auto target = b.intersect(f.preimage(a));
  c.check(blocks_of(report.components) == closure_components(&f, target, r_x, r_y),
          "double components differ from the closure oracle");
  const auto [bx, by] = brute_bounds(f, target, r_x, r_y);
  c.check(bx <= big_r_x && by <= big_r_y, "closure oracle finds a component beyond (R_X, R_Y)");
  // A too-small R_X must be reported as a precondition failure.
  if (big_r_x.is_rational() && !big_r_x.is_zero()) {
    const auto smaller = Distance(big_r_x.rational() - Rational(1, 2));
    const auto bad = check_double_control(f, b, a, r_x, r_y, smaller, big_r_y);
    c.check(!bad.precondition_ok, "undersized R_X accepted");
  }
}

struct Level {
  PointSubset set;
  Distance r_x, r_y, big_r_x, big_r_y;
};

// Builds levels finest first so that each coarser scale clears the gap.
std::vector<Level> glue_levels(Rng& rng, const ScaleFunction& f, std::size_t count) {
  std::vector<Level> fine_first;
  Distance r_x(rng.between(0, 2));
  Distance r_y(rng.between(0, 2));
  for (std::size_t i = 0; i < count; ++i) {
    Level level;
    level.set = random_subset(rng, f.domain(), 45);
    if (i > 0) {
      const auto& prev = fine_first.back();
      const auto slack_x = Distance(Rational(rng.between(1, 4), rng.coin(30) ? 2 : 1));
      const auto slack_y = Distance(Rational(rng.between(1, 4), rng.coin(30) ? 2 : 1));
      r_x = prev.big_r_x + Rational(2) * prev.r_x + slack_x;
      r_y = prev.big_r_y + Rational(2) * prev.r_y + slack_y;
    }
    level.r_x = r_x;
    level.r_y = r_y;
    const auto [bx, by] = brute_bounds(f, level.set, r_x, r_y);
    // Declared bounds are rounded up so the gap sums stay exact for l2 spaces.
    level.big_r_x = Distance(bx.ceil() + (rng.coin(30) ? rng.between(0, 2) : 0));
    level.big_r_y = Distance(by.ceil());
    fine_first.push_back(std::move(level));
  }
  std::reverse(fine_first.begin(), fine_first.end());
  return fine_first;  // coarsest first
}

void check_glue(Rng& rng, Case& c, std::size_t count) {
  const auto x = random_space(rng, 3, 11);
  std::vector<PointId> map(x.size());
  // Mix of random maps and the identity onto a copy of the domain.
  ScaleFunction f;
  if (rng.coin(30)) {
    std::iota(map.begin(), map.end(), PointId{0});
    f = ScaleFunction(x, x, std::move(map));
  } else {
    f = random_map(rng, x);
  }
  const auto levels = glue_levels(rng, f, count);
  std::vector<GlueLevel> cascade;
  PointSubset joined = PointSubset::none(x);
  for (const auto& level : levels) {
    cascade.push_back({level.r_x, level.r_y, level.big_r_x, level.big_r_y});
    joined = joined.unite(level.set);
    const auto dbl = double_components(f, level.set, level.r_x, level.r_y);
    c.check(dbl.max_diameter() <= level.big_r_x, "level set exceeds its declared R_X");
  }
  const auto glue = union_glue_bound(cascade);
  c.check(glue.valid, "gap conditions rejected at level " + std::to_string(glue.first_violation));
  if (!glue.valid) return;
  const auto& finest = levels.back();
  const auto comps = double_components(f, joined, finest.r_x, finest.r_y);
  c.check(blocks_of(comps) == closure_components(&f, joined, finest.r_x, finest.r_y),
          "union components differ from the closure oracle");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    c.check(comps.diameters[i] <= glue.bound_x && comps.image_diameters[i] <= glue.bound_y,
            "union component (" + comps.diameters[i].str() + ", " + comps.image_diameters[i].str() +
                ") exceeds glue bound (" + glue.bound_x.str() + ", " + glue.bound_y.str() + ")");
  }
  // Shrinking a coarser scale below the gap must be flagged.
  if (count >= 2) {
    auto broken = cascade;
    broken[0].r_x = cascade[1].big_r_x + Rational(2) * cascade[1].r_x;
    const auto bad = union_glue_bound(broken);
    c.check(!bad.valid && bad.first_violation == 1, "gap violation not flagged at index 1");
  }
}

void glue(Rng& rng, Case& c) { check_glue(rng, c, 2); }
void glue_chain(Rng& rng, Case& c) { check_glue(rng, c, static_cast<std::size_t>(rng.between(1, 4))); }

// R-neighborhoods of parts decompose B(A, R) with bound D + 2R at scale r.
void neighborhood_suite(Rng& rng, Case& c) {
  FiniteMetricSpace x;
  if (rng.coin(50)) {
    x = interval_space(0, rng.between(8, 30));
  } else {
    x = zd_ball(2, rng.between(2, 5));
  }
  const auto a = random_subset(rng, x, 35);
  const int parts_count = static_cast<int>(rng.between(1, 3));
  std::vector<std::vector<PointId>> buckets(static_cast<std::size_t>(parts_count));
  for (const auto p : a) buckets[static_cast<std::size_t>(rng.between(0, parts_count - 1))].push_back(p);
  std::vector<PointSubset> parts;
  for (auto& bucket : buckets) parts.emplace_back(x, std::move(bucket));
  const Distance r(rng.between(0, 3));
  const Distance big_r(rng.between(0, 3));
  const auto coarse = r + Rational(2) * big_r;
  Distance bound(0);
  for (const auto& part : parts) {
    for (const auto& block : closure_components(nullptr, part, coarse, Distance::infinity())) {
      bound = max(bound, brute_diameter(x, block));
    }
  }
  const auto result = neighborhood_transfer(a, parts, r, big_r, bound);
  c.check(result.ok, "transfer reported failure");
  std::vector<PointId> expected;
  for (PointId p = 0; p < x.size(); ++p) {
    for (const auto q : a) {
      if (x.distance(p, q) <= big_r) {
        expected.push_back(p);
        break;
      }
    }
  }
  c.check(std::vector<PointId>(result.neighborhood.begin(), result.neighborhood.end()) == expected,
          "B(A, R) differs from the brute-force scan");
  c.check(result.bound == bound + Rational(2) * big_r, "bound is not D + 2R");
  for (const auto& part : result.parts) {
    for (const auto& block : closure_components(nullptr, part, r, Distance::infinity())) {
      c.check(brute_diameter(x, block) <= result.bound, "an output r-component exceeds D + 2R");
    }
  }
}

// Exhaustive minimum over all colorings, without symmetry pruning.
Distance exhaustive_min(const PointSubset& s, const Distance& r, int parts) {
  const auto n = s.size();
  std::vector<int> color(n, 0);
  Distance best = Distance::infinity();
  while (true) {
    std::vector<std::vector<PointId>> classes(static_cast<std::size_t>(parts));
    for (std::size_t i = 0; i < n; ++i) classes[static_cast<std::size_t>(color[i])].push_back(s[i]);
    Distance worst(0);
    for (auto& cls : classes) {
      const PointSubset part(s.space(), cls);
      for (const auto& block : closure_components(nullptr, part, r, Distance::infinity())) {
        worst = max(worst, brute_diameter(s.space(), block));
      }
    }
    best = min(best, worst);
    std::size_t i = 0;
    while (i < n && color[i] == parts - 1) color[i++] = 0;
    if (i == n) break;
    ++color[i];
  }
  return n == 0 ? Distance(0) : best;
}

void oracle_suite(Rng& rng, Case& c) {
  const auto x = random_space(rng, 1, 12);
  const auto s = PointSubset::all(x);
  const auto r = random_scale(rng, x, false);
  const int parts = static_cast<int>(rng.between(1, 3));
  const auto oracle = min_bound_oracle(s, r, parts);
  const auto heuristic = ball_carve_minimize(s, r, parts);
  c.check(heuristic.bound >= oracle.bound,
          "heuristic " + heuristic.bound.str() + " below oracle " + oracle.bound.str());
  c.check(oracle.parts.size() == static_cast<std::size_t>(parts), "witness has the wrong number of parts");
  std::vector<PointId> seen;
  Distance witnessed(0);
  for (const auto& part : oracle.parts) {
    seen.insert(seen.end(), part.begin(), part.end());
    for (const auto& block : closure_components(nullptr, part, r, Distance::infinity())) {
      witnessed = max(witnessed, brute_diameter(x, block));
    }
  }
  std::sort(seen.begin(), seen.end());
  c.check(seen == std::vector<PointId>(s.begin(), s.end()), "witness is not a partition of S");
  c.check(witnessed <= oracle.bound, "witness exceeds the oracle bound");
  if (s.size() <= 7) c.check(exhaustive_min(s, r, parts) == oracle.bound, "oracle is not the exhaustive minimum");
  const auto greedy = ball_carve_decompose(s, r, parts, heuristic.bound);
  c.check(greedy.has_value() && decomposition_bound(greedy->parts, r) <= heuristic.bound,
          "greedy fails at its own minimized bound");
}

using SuiteFn = void (*)(Rng&, Case&);

SuiteFn suite_fn(std::string_view name) {
  if (name == "coincidence") return coincidence;
  if (name == "double-control") return double_control;
  if (name == "glue") return glue;
  if (name == "glue-chain") return glue_chain;
  if (name == "neighborhood") return neighborhood_suite;
  if (name == "oracle") return oracle_suite;
  return nullptr;
}

SuiteResult run_suite(const std::string& name, std::size_t cases, std::uint64_t seed) {
  const auto fn = suite_fn(name);
  SuiteResult out;
  out.suite = name;
  out.cases = cases;
  for (std::size_t i = 0; i < cases; ++i) {
    Rng rng(case_seed(seed, name, i));
    Case c(i);
    try {
      fn(rng, c);
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    if (c.failed()) {
      ++out.violations;
      if (out.failures.size() < kMaxFailures) out.failures.push_back(c.failure());
    }
  }
  return out;
}

}  // namespace

PropReport run_proptest(std::string_view suite, std::size_t cases, std::uint64_t seed) {
  PropReport report;
  report.seed = seed;
  if (suite == "all") {
    for (const auto& name : proptest_suites()) report.suites.push_back(run_suite(name, cases, seed));
    return report;
  }
  if (suite_fn(suite) == nullptr) throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  report.suites.push_back(run_suite(std::string(suite), cases, seed));
  return report;
}

}  // namespace coarsedim
