#include <random>

#include "coarsedim/gallery.hpp"
#include "coarsedim/metric_space.hpp"
#include "doctest.h"

using namespace coarsedim;

namespace {

FiniteMetricSpace matrix3(std::int64_t ab, std::int64_t bc, std::int64_t ac) {
  return FiniteMetricSpace::from_matrix({"a", "b", "c"},
                                        {0, ab, ac, ab, 0, bc, ac, bc, 0});
}

std::vector<PointId> brute_neighborhood(const FiniteMetricSpace& x, const PointSubset& s, const Distance& r) {
  std::vector<PointId> out;
  for (PointId p = 0; p < x.size(); ++p) {
    for (const auto q : s) {
      if (x.distance(p, q) <= r) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

Distance brute_diameter(const PointSubset& s) {
  Distance best(0);
  for (const auto p : s) {
    for (const auto q : s) best = max(best, s.space().distance(p, q));
  }
  return best;
}

FiniteMetricSpace random_coords(std::mt19937_64& rng, Norm norm, std::size_t dims, std::size_t n,
                                std::vector<std::int64_t> moduli = {}, std::vector<std::int64_t> weights = {}) {
  CoordinateTable t;
  t.dims = dims;
  t.norm = norm;
  t.moduli = std::move(moduli);
  t.weights = std::move(weights);
  std::vector<std::vector<std::int64_t>> rows;
  while (rows.size() < n) {
    std::vector<std::int64_t> row(dims);
    for (std::size_t a = 0; a < dims; ++a) {
      const auto m = t.moduli.empty() ? 0 : t.moduli[a];
      row[a] = m != 0 ? static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(m))
                      : static_cast<std::int64_t>(rng() % 61) - 30;
    }
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
  }
  for (const auto& row : rows) t.values.insert(t.values.end(), row.begin(), row.end());
  return FiniteMetricSpace::from_coordinates(std::move(t));
}

}  // namespace

TEST_CASE("distance arithmetic is exact") {
  CHECK(Distance::parse("3/6") == Distance(Rational(1, 2)));
  CHECK(Distance::parse("sqrt(4)") == Distance(2));
  CHECK(Distance::parse("sqrt(2)") < Distance(Rational(3, 2)));
  CHECK(Distance::parse("sqrt(2)") > Distance(Rational(7, 5)));
  CHECK(Distance::infinity() > Distance(1'000'000'000));
  CHECK(Distance::infinity() + Distance(1) == Distance::infinity());
  CHECK((Rational(2) * Distance::infinity()).is_infinite());
  CHECK((Rational(0) * Distance::infinity()) == Distance(0));
  CHECK(Distance::sqrt_of(Rational(8)) == Rational(2) * Distance::sqrt_of(Rational(2)));
  CHECK_THROWS_AS(Distance::parse("sqrt(2)") + Distance(1), InexactDistance);
  CHECK(Distance(Rational(7, 2)).ceil() == 4);
  CHECK(Distance::parse("sqrt(10)").floor() == 3);
  CHECK(Distance(Rational(5, 3)).str() == "5/3");
  CHECK_THROWS(Rational(INT64_MAX) * Rational(2));
}

TEST_CASE("load a matrix space") {
  const auto s = matrix3(1, 1, 2);
  CHECK(s.size() == 3);
  CHECK(s.distance(s.at("a"), s.at("c")) == Distance(2));
  CHECK(s.backing() == Backing::kMatrix);
}

TEST_CASE("triangle violation names the triple") {
  try {
    (void)matrix3(1, 1, 5);
    FAIL("expected a triangle violation");
  } catch (const TriangleViolation& e) {
    CHECK(e.a() == "a");
    CHECK(e.b() == "b");
    CHECK(e.c() == "c");
  }
}

TEST_CASE("malformed matrices are rejected") {
  CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"a", "b"}, {0, 1, 2, 0}), InvalidSpace);
  CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"a", "b"}, {1, 1, 1, 0}), InvalidSpace);
  CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"a", "b"}, {0, 0, 0, 0}), InvalidSpace);
  CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"a", "a"}, {0, 1, 1, 0}), InvalidSpace);
  CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"a", "b"}, {0, 1, 1}), InvalidSpace);
}

TEST_CASE("graph backing gives shortest paths") {
  const auto g = FiniteMetricSpace::from_graph({"a", "b", "c"}, {{"a", "b", Distance(1)}, {"b", "c", Distance(1)}});
  CHECK(g.distance(g.at("a"), g.at("c")) == Distance(2));
  CHECK(g.backing() == Backing::kGraph);
  const auto shortcut = FiniteMetricSpace::from_graph(
      {"a", "b", "c"}, {{"a", "b", Distance(1)}, {"b", "c", Distance(1)}, {"a", "c", Distance(Rational(3, 2))}});
  CHECK(shortcut.distance(shortcut.at("a"), shortcut.at("c")) == Distance(Rational(3, 2)));
  CHECK_THROWS_AS(FiniteMetricSpace::from_graph({"a", "b", "c"}, {{"a", "b", Distance(1)}}), InvalidSpace);
}

TEST_CASE("coordinate norms") {
  CoordinateTable t;
  t.dims = 2;
  t.values = {0, 0, 3, 4};
  for (const auto& [norm, expected] : std::vector<std::pair<Norm, Distance>>{
           {Norm::kL1, Distance(7)}, {Norm::kSup, Distance(4)}, {Norm::kL2Squared, Distance(5)}}) {
    auto copy = t;
    copy.norm = norm;
    const auto s = FiniteMetricSpace::from_coordinates(copy);
    CHECK(s.distance(0, 1) == expected);
    CHECK(s.name(1) == "(3,4)");
  }
  CoordinateTable cyc;
  cyc.dims = 1;
  cyc.moduli = {5};
  cyc.weights = {5};
  cyc.values = {0, 3};
  const auto z5 = FiniteMetricSpace::from_coordinates(cyc);
  CHECK(z5.distance(0, 1) == Distance(10));
}

TEST_CASE("product of two-point spaces") {
  const auto two = FiniteMetricSpace::from_matrix({"a", "b"}, {0, 1, 1, 0});
  const auto p = product_sum(two, two);
  CHECK(p.size() == 4);
  CHECK(p.distance(p.at("(a,a)"), p.at("(b,b)")) == Distance(2));
  CHECK(p.distance(p.at("(a,b)"), p.at("(b,a)")) == Distance(2));
  CHECK(p.distance(p.at("(a,a)"), p.at("(a,b)")) == Distance(1));
}

TEST_CASE("product with a point is isometric") {
  const auto point = FiniteMetricSpace::from_matrix({"o"}, {0});
  const auto y = FiniteMetricSpace::from_graph({"a", "b", "c"}, {{"a", "b", Distance(2)}, {"b", "c", Distance(3)}});
  const auto p = product_sum(point, y);
  REQUIRE(p.size() == y.size());
  for (PointId i = 0; i < y.size(); ++i) {
    for (PointId j = 0; j < y.size(); ++j) CHECK(p.distance(i, j) == y.distance(i, j));
  }
}

TEST_CASE("product of Z-balls matches coordinate l1") {
  const auto a = interval_space(0, 3);
  const auto p = product_sum(a, a);
  CoordinateTable t;
  t.dims = 2;
  for (int x = 0; x <= 3; ++x) {
    for (int y = 0; y <= 3; ++y) {
      t.values.push_back(x);
      t.values.push_back(y);
    }
  }
  const auto c = FiniteMetricSpace::from_coordinates(t);
  REQUIRE(p.size() == c.size());
  for (PointId i = 0; i < p.size(); ++i) {
    for (PointId j = 0; j < p.size(); ++j) CHECK(p.distance(i, j) == c.distance(i, j));
  }
  // A lazily evaluated product agrees too.
  const auto g = FiniteMetricSpace::from_graph({"0", "1", "2", "3"},
                                               {{"0", "1", Distance(1)}, {"1", "2", Distance(1)}, {"2", "3", Distance(1)}});
  const auto lazy = product_sum(g, g);
  CHECK(lazy.backing() == Backing::kProduct);
  for (PointId i = 0; i < p.size(); ++i) {
    for (PointId j = 0; j < p.size(); ++j) CHECK(lazy.distance(i, j) == c.distance(i, j));
  }
}

TEST_CASE("product size cap") {
  Limits limits;
  limits.max_points = 100;
  const auto a = interval_space(0, 10);
  CHECK_THROWS_AS(product_sum(a, a, limits), CapExceeded);
}

TEST_CASE("diameter") {
  const auto line = line_space({0, 1, 3});
  CHECK(diameter(PointSubset(line, {1})) == Distance(0));
  CHECK(diameter(PointSubset::all(line)) == Distance(3));
  CHECK_THROWS(diameter(PointSubset::none(line)));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto norm = std::vector<Norm>{Norm::kL1, Norm::kSup, Norm::kL2Squared}[trial % 3];
    const auto dims = static_cast<std::size_t>(1 + trial % 4);
    auto x = trial % 5 == 4 ? random_coords(rng, Norm::kL1, 2, 30, {7, 0}, {2, 3}) : random_coords(rng, norm, dims, 30);
    std::vector<PointId> ids;
    for (PointId p = 0; p < x.size(); ++p) {
      if (rng() % 2) ids.push_back(p);
    }
    if (ids.empty()) ids.push_back(0);
    const PointSubset s(x, ids);
    CHECK(diameter(s) == brute_diameter(s));
  }
}

TEST_CASE("neighborhood") {
  const auto line = interval_space(0, 10);
  const auto s = PointSubset(line, {line.at("(5)")});
  CHECK(neighborhood(s, Distance(0)) == s);
  CHECK(neighborhood(s, Distance(2)).names() == std::vector<std::string>{"(3)", "(4)", "(5)", "(6)", "(7)"});
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto norm = std::vector<Norm>{Norm::kL1, Norm::kSup, Norm::kL2Squared}[trial % 3];
    auto x = trial % 4 == 3 ? random_coords(rng, Norm::kL1, 3, 40, {5, 6, 0}, {1, 2, 1})
                            : random_coords(rng, norm, 1 + trial % 3, 40);
    std::vector<PointId> ids;
    for (PointId p = 0; p < x.size(); ++p) {
      if (rng() % 5 == 0) ids.push_back(p);
    }
    const PointSubset a(x, ids);
    const Distance r(static_cast<std::int64_t>(rng() % 6));
    const auto got = neighborhood(a, r);
    CHECK(std::vector<PointId>(got.begin(), got.end()) == brute_neighborhood(x, a, r));
    CHECK(neighborhood(a, r + Distance(1)).is_subset_of(neighborhood(a, r + Distance(2))));
    CHECK(got.is_subset_of(neighborhood(got, Distance(1))));
  }
}

TEST_CASE("neighborhood composition on a geodesic space") {
  const auto line = interval_space(0, 30);
  const PointSubset s(line, {3, 17});
  CHECK(neighborhood(neighborhood(s, Distance(2)), Distance(3)) == neighborhood(s, Distance(5)));
}

TEST_CASE("restrict") {
  const auto g = FiniteMetricSpace::from_graph({"a", "b", "c", "d"},
                                               {{"a", "b", Distance(1)}, {"b", "c", Distance(2)}, {"c", "d", Distance(3)}});
  const auto all = restrict_to(PointSubset::all(g));
  for (PointId i = 0; i < g.size(); ++i) {
    for (PointId j = 0; j < g.size(); ++j) CHECK(all.distance(i, j) == g.distance(i, j));
  }
  const auto single = restrict_to(PointSubset(g, {2}));
  CHECK(single.size() == 1);
  CHECK(single.name(0) == "c");
  const PointSubset s(g, {0, 2, 3});
  CHECK(diameter(PointSubset::all(restrict_to(s))) == diameter(s));
  CHECK_THROWS(restrict_to(PointSubset::none(g)));
}

TEST_CASE("materialize respects the pair budget") {
  const auto x = zd_ball(2, 10);
  Limits small;
  small.pair_budget = 100;
  CHECK_THROWS_AS(materialize_matrix(x, small), CapExceeded);
  const auto m = materialize_matrix(interval_space(0, 3));
  CHECK(m.size() == 16);
  CHECK(m[3] == Distance(3));
}

TEST_CASE("point subsets") {
  const auto line = interval_space(0, 5);
  const PointSubset a(line, {3, 1, 1, 2});
  CHECK(a.size() == 3);
  const PointSubset b(line, {2, 4});
  CHECK(a.unite(b).size() == 4);
  CHECK(a.intersect(b).size() == 1);
  CHECK(a.minus(b).size() == 2);
  CHECK(a.intersect(b).is_subset_of(a));
  CHECK_THROWS(PointSubset(line, {9}));
}
