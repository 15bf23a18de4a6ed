#include <fstream>
#include <random>
#include <sstream>

#include "coarsedim/components.hpp"
#include "coarsedim/gallery.hpp"
#include "doctest.h"

using namespace coarsedim;

namespace {

std::int64_t brute_cyclic(std::int64_t n, std::int64_t x) {
  std::int64_t best = -1;
  for (std::int64_t k = -n; k <= n; ++k) {
    if (((k - x) % n + n) % n != 0) continue;
    const auto c = n * (k < 0 ? -k : k);
    if (best < 0 || c < best) best = c;
  }
  return best;
}

std::vector<std::int64_t> coords(const FiniteMetricSpace& s, PointId p) {
  const auto row = s.coordinates()->row(p);
  return {row.begin(), row.end()};
}

std::optional<PointId> find_coords(const FiniteMetricSpace& s, const std::vector<std::int64_t>& c) {
  for (PointId p = 0; p < s.size(); ++p) {
    if (coords(s, p) == c) return p;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("lattice balls") {
  CHECK(zd_ball(1, 3).size() == 7);
  CHECK(zd_ball(2, 2).size() == 13);
  CHECK(zd_ball(3, 1).size() == 7);
  const auto b = zd_ball(2, 1);
  CHECK(b.name(0) == "(-1,0)");
  CHECK(b.name(4) == "(1,0)");
  CHECK(interval_space(-2, 2).name(0) == "(-2)");
  CHECK_THROWS_AS(zd_ball(2, 400), CapExceeded);
}

TEST_CASE("bricks in one and two dimensions") {
  const auto line = PointSubset::all(interval_space(0, 40));
  for (const std::int64_t r : {1, 2, 3}) {
    const auto c = brick_decomposer(1).decompose(line, Distance(r));
    CHECK(c.k() == 2);
    CHECK(c.bound == Distance(2 * r));
    const auto rep = verify_kcover(c);
    CHECK(rep.ok());
    CHECK(rep.observed_bound <= Distance(2 * r));
  }
  const auto plane = PointSubset::all(zd_ball(2, 20));
  const auto c = brick_decomposer(2).decompose(plane, Distance(1));
  CHECK(c.k() == 3);
  CHECK(c.bound == Distance(brick_constant(2)));
  CHECK(verify_kcover(c).ok());
  const auto half = brick_decomposer(2).decompose(plane, Distance(Rational(1, 2)));
  CHECK(half.bound == Distance(6));
  CHECK(verify_kcover(half).ok());
}

TEST_CASE("bricks saturate on small carriers") {
  const auto line = PointSubset::all(interval_space(0, 5));
  const auto c = brick_decomposer(1).decompose(line, Distance(6));
  CHECK(c.saturated);
  CHECK(c.families[0].size() == 1);
  CHECK(c.families[0][0] == line);
  CHECK(verify_kcover(c).ok());
  CHECK(brick_decomposer(1).decompose(line, Distance::infinity()).saturated);
}

TEST_CASE("interval decomposer") {
  const auto line = PointSubset::all(interval_space(-30, 30));
  for (const std::int64_t r : {1, 2, 5}) {
    const auto c = interval_cover(line, Distance(r), 3);
    CHECK(c.k() == 3);
    CHECK(c.n == 1);
    CHECK(c.bound == Distance(2 * r));
    const auto rep = verify_kcover(c);
    CHECK(rep.ok());
    CHECK(rep.min_multiplicity >= 2);
  }
  CHECK(decomposer_dimension("interval") == 1);
  CHECK(decomposer_dimension("brick:3") == 3);
  CHECK_THROWS(make_space_decomposer("interval", 4));
  CHECK_THROWS(make_space_decomposer("carve", 2));
  CHECK(make_space_decomposer("brick:1", 3).bound(Distance(1)) == Distance(8));
  CHECK(make_space_decomposer("interval", 3).bound(Distance(1)) == Distance(2));
}

TEST_CASE("segments space") {
  const auto seg = segments_space(2);
  CHECK(seg.y.size() == 2);
  CHECK(seg.x.size() == 5);
  CHECK(seg.y.name(0) == "(2)");
  CHECK(seg.y.name(1) == "(4)");
  const auto big = segments_space(6);
  for (PointId y = 0; y < big.y.size(); ++y) {
    const auto fib = big.f.fiber(y);
    const PointSubset s(big.x, {fib.begin(), fib.end()});
    CHECK(diameter(s) == Distance(static_cast<std::int64_t>(y) + 1));
  }
  const std::vector<Distance> rs{Distance(1), Distance(3), Distance(10), Distance(100)};
  for (const auto& [r, c] : coarseness_profile(big.f, rs)) CHECK(c <= r);
}

TEST_CASE("cyclic costs") {
  CHECK(cyclic_cost(2, 1) == 2);
  CHECK(cyclic_cost(5, 3) == 10);
  CHECK(cyclic_cost(6, 3) == 18);
  CHECK(cyclic_cost(7, -1) == 7);
  for (std::int64_t n = 2; n <= 9; ++n) {
    for (std::int64_t x = 0; x < n; ++x) CHECK(cyclic_cost(n, x) == brute_cyclic(n, x));
  }
  for (const std::int64_t n : {2, 3, 4, 5}) CHECK(cyclic_cost(2 * n, n) == 2 * n * n);
}

TEST_CASE("torsion sum truncation") {
  const auto g = torsion_sum_space(5, 8);
  CHECK(g.name(0) == "(0,0,0,0)");
  CHECK(truncation_norm(g, 0) == 0);
  const auto g2 = find_coords(g, {1, 0, 0, 0});
  REQUIRE(g2.has_value());
  CHECK(g.distance(0, *g2) == Distance(2));
  for (PointId p = 0; p < g.size(); ++p) CHECK(truncation_norm(g, p) <= 8);
  for (PointId p = 1; p < g.size(); ++p) CHECK(truncation_norm(g, p - 1) <= truncation_norm(g, p));

  // invariance under translation, checked on the full finite group
  const auto full = torsion_sum_space(4, 1000);
  CHECK(full.size() == 24);
  std::mt19937_64 rng(2);
  const std::vector<std::int64_t> mod{2, 3, 4};
  for (int trial = 0; trial < 200; ++trial) {
    const PointId p = static_cast<PointId>(rng() % 24);
    const PointId q = static_cast<PointId>(rng() % 24);
    const PointId a = static_cast<PointId>(rng() % 24);
    auto shift = [&](PointId x) {
      auto c = coords(full, x);
      const auto ca = coords(full, a);
      for (std::size_t i = 0; i < 3; ++i) c[i] = (c[i] + ca[i]) % mod[i];
      return *find_coords(full, c);
    };
    CHECK(full.distance(p, q) == full.distance(shift(p), shift(q)));
  }
}

TEST_CASE("tower parameters") {
  const auto p = tower_params(3);
  CHECK(p.r[0] == 2);
  CHECK(p.s[0] == 16);
  CHECK(p.t[0] == 1);
  CHECK(p.t[1] == 9);
  for (std::size_t n = 0; n < p.r.size(); ++n) CHECK(p.s[n] == 8 * static_cast<std::int64_t>(n + 1) * p.r[n]);
  for (std::size_t n = 1; n < p.t.size(); ++n) {
    CHECK(p.t[n] - p.t[n - 1] == 4 * static_cast<std::int64_t>(n) * p.t[n - 1] * p.r[n - 1]);
  }
  CHECK_THROWS(tower_params(2, [](int) { return 0; }));
}

TEST_CASE("tower parameters match the committed fixture table") {
  std::ifstream in(std::string(COARSEDIM_FIXTURES) + "/tower.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto rule_end = line.find("\",");
    std::string rule;
    std::string rest;
    if (line.front() == '"') {
      rule = line.substr(1, rule_end - 1);
      rest = line.substr(rule_end + 2);
    } else {
      rule = line.substr(0, line.find(','));
      rest = line.substr(line.find(',') + 1);
    }
    std::vector<std::int64_t> v;
    std::stringstream ss(rest);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stoll(cell));
    REQUIRE(v.size() == 4);
    const int n = static_cast<int>(v[0]);
    TowerRule r;
    if (rule == "n+1") {
      r = default_tower_rule;
    } else if (rule == "2n") {
      r = [](int k) { return std::int64_t{2} * k; };
    } else {
      std::vector<std::int64_t> list;
      std::stringstream ls(rule);
      while (std::getline(ls, cell, ',')) list.push_back(std::stoll(cell));
      r = [list](int k) { return list.at(static_cast<std::size_t>(k - 1)); };
    }
    const auto p = tower_params(n, r);
    INFO(line);
    CHECK(p.r.back() == v[1]);
    CHECK(p.s.back() == v[2]);
    CHECK(p.t.back() == v[3]);
    ++rows;
  }
  CHECK(rows >= 20);
}

TEST_CASE("tower truncation") {
  const auto params = tower_params(2);
  const auto x = nowak_tower_space(2, 24, params);
  CHECK(x.coordinates()->dims == 5);
  const auto e1 = find_coords(x, {1, 0, 0, 0, 0});
  REQUIRE(e1.has_value());
  CHECK(x.distance(0, *e1) == Distance(1));
  const auto e2 = find_coords(x, {0, 0, 1, 0, 0});
  REQUIRE(e2.has_value());
  CHECK(x.distance(0, *e2) == Distance(9));
  CHECK(x.distance(0, *find_coords(x, {15, 0, 0, 0, 0})) == Distance(1));

  // components at scale t(2)/2 never leave a coset of G_1
  const auto comps = r_components(PointSubset::all(x), Distance(Rational(9, 2)));
  CHECK(comps.size() > 1);
  for (const auto& block : comps.blocks) {
    const auto first = coords(x, block[0]);
    for (const auto p : block) {
      const auto c = coords(x, p);
      CHECK(std::equal(c.begin() + 2, c.end(), first.begin() + 2));
    }
  }
  CHECK_THROWS(nowak_tower_space(3, 10, params));
}
