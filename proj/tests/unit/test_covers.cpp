#include "coarsedim/covers.hpp"
#include "coarsedim/gallery.hpp"
#include "doctest.h"

using namespace coarsedim;

namespace {

using Family = std::vector<std::vector<std::string>>;

PointSubset names(const FiniteMetricSpace& s, std::initializer_list<int> xs) {
  std::vector<std::string> n;
  for (const auto x : xs) n.push_back("(" + std::to_string(x) + ")");
  return PointSubset::from_names(s, n);
}

PointSubset range(const FiniteMetricSpace& s, int lo, int hi) {
  std::vector<std::string> n;
  for (int x = lo; x <= hi; ++x) n.push_back("(" + std::to_string(x) + ")");
  return PointSubset::from_names(s, n);
}

KFamilyCover nine_point_cover(const Distance& scale) {
  const auto line = interval_space(0, 8);
  KFamilyCover c;
  c.carrier = PointSubset::all(line);
  c.families = {{range(line, 0, 2), range(line, 6, 8)}, {range(line, 3, 5)}};
  c.scale = scale;
  c.bound = Distance(2);
  c.n = 1;
  return c;
}

std::vector<Family> family_names(const KFamilyCover& c) {
  std::vector<Family> out;
  for (const auto& f : c.families) {
    Family fam;
    for (const auto& s : f) fam.push_back(s.names());
    out.push_back(fam);
  }
  return out;
}

// Independent restatement of the three cover conditions.
bool brute_valid(const KFamilyCover& c) {
  const auto& x = c.space();
  for (const auto& family : c.families) {
    for (std::size_t a = 0; a < family.size(); ++a) {
      for (const auto p : family[a]) {
        for (const auto q : family[a]) {
          if (x.distance(p, q) > c.bound) return false;
        }
      }
      for (std::size_t b = a + 1; b < family.size(); ++b) {
        for (const auto p : family[a]) {
          for (const auto q : family[b]) {
            if (!(x.distance(p, q) > c.scale)) return false;
          }
        }
      }
    }
  }
  for (const auto p : c.carrier) {
    int count = 0;
    for (const auto& family : c.families) {
      for (const auto& set : family) count += set.contains(p) ? 1 : 0;
    }
    if (count < c.multiplicity()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("verify a two-family line cover") {
  const auto ok = verify_kcover(nine_point_cover(Distance(3)));
  CHECK(ok.ok());
  CHECK(ok.observed_bound == Distance(2));
  CHECK(ok.min_multiplicity == 1);

  const auto bad = verify_kcover(nine_point_cover(Distance(4)));
  CHECK(!bad.ok());
  REQUIRE(bad.violations.size() == 1);
  const auto& v = bad.violations[0];
  CHECK(v.kind == CoverViolation::Kind::kClosePair);
  const auto s = nine_point_cover(Distance(4)).space();
  CHECK(s.name(v.p) == "(2)");
  CHECK(s.name(v.q) == "(6)");
  CHECK(v.value == Distance(4));
}

TEST_CASE("verify reports oversized and undercovered sets") {
  auto c = nine_point_cover(Distance(3));
  c.bound = Distance(1);
  auto rep = verify_kcover(c);
  CHECK(rep.total_violations == 3);
  CHECK(rep.violations[0].kind == CoverViolation::Kind::kOversized);
  c = nine_point_cover(Distance(3));
  c.n = 0;
  rep = verify_kcover(c);
  CHECK(rep.total_violations == 9);
  CHECK(rep.violations[0].kind == CoverViolation::Kind::kUndercovered);
  rep = verify_kcover(c, 2);
  CHECK(rep.violations.size() == 2);
  CHECK(rep.total_violations == 9);
}

TEST_CASE("empty cover passes") {
  const auto empty = FiniteMetricSpace::from_matrix({}, {});
  KFamilyCover c;
  c.carrier = PointSubset::all(empty);
  c.families = {{}, {}};
  c.scale = Distance(1);
  c.bound = Distance(0);
  c.n = 1;
  CHECK(verify_kcover(c).ok());
}

TEST_CASE("ostrand expansion of the line cover") {
  const auto out = ostrand_expand(nine_point_cover(Distance(3)), Distance(1));
  CHECK(out.k() == 3);
  CHECK(out.bound == Distance(4));
  CHECK(out.scale == Distance(1));
  CHECK(family_names(out) ==
        std::vector<Family>{{range(out.space(), 0, 3).names(), range(out.space(), 5, 8).names()},
                            {range(out.space(), 2, 6).names()},
                            {names(out.space(), {0, 1}).names(), names(out.space(), {7, 8}).names(),
                             names(out.space(), {4}).names()}});
  const auto rep = verify_kcover(out);
  CHECK(rep.ok());
  CHECK(rep.min_multiplicity >= 2);
  CHECK(brute_valid(out));
}

TEST_CASE("ostrand expansion rejects an invalid input") {
  CHECK_THROWS_AS(ostrand_expand(nine_point_cover(Distance(3)), Distance(2)), PreconditionFailure);
}

TEST_CASE("ostrand expansion of a one-point space") {
  const auto point = FiniteMetricSpace::from_matrix({"o"}, {0});
  KFamilyCover c;
  c.carrier = PointSubset::all(point);
  c.families = {{PointSubset::all(point)}};
  c.scale = Distance(3);
  c.bound = Distance(0);
  c.n = 0;
  const auto out = ostrand_expand(c, Distance(1));
  CHECK(out.k() == 2);
  CHECK(verify_kcover(out).ok());
  CHECK(out.bound == Distance(2));
}

TEST_CASE("third family sets lie inside single input sets") {
  const auto ball = zd_ball(2, 12);
  const auto base = brick_decomposer(2).decompose(PointSubset::all(ball), Distance(6));
  const auto out = ostrand_expand(base, Distance(2));
  CHECK(verify_kcover(out).ok());
  for (const auto& set : out.families.back()) {
    bool inside = false;
    for (const auto& family : base.families) {
      for (const auto& u : family) inside = inside || set.is_subset_of(u);
    }
    CHECK(inside);
  }
  CHECK(brute_valid(out));
}

TEST_CASE("ostrand tower bounds") {
  const auto line = interval_space(-30, 30);
  const auto all = PointSubset::all(line);
  const auto base = brick_decomposer(1);
  const auto same = ostrand_tower(all, base, 2, Distance(1));
  CHECK(same.k() == 2);
  CHECK(same.bound == Distance(2));
  const auto k3 = ostrand_tower(all, base, 3, Distance(1));
  CHECK(k3.bound == Distance(8));
  CHECK(verify_kcover(k3).ok());
  const auto k4 = ostrand_tower(all, base, 4, Distance(1));
  CHECK(k4.bound == ostrand_tower(all, base, 3, Distance(3)).bound + Distance(2));
  CHECK(k4.bound == Distance(26));
  CHECK(verify_kcover(k4).ok());
  CHECK(ostrand_bound(base.bound, 2, Distance(1)) == Distance(26));
  CHECK(ostrand_bound(base.bound, 0, Distance(Rational(1, 2))) == Distance(2));
  CHECK_THROWS(ostrand_tower(all, base, 1, Distance(1)));
}

TEST_CASE("product of singleton covers") {
  const auto two = FiniteMetricSpace::from_matrix({"a", "b"}, {0, 3, 3, 0});
  KFamilyCover c;
  c.carrier = PointSubset::all(two);
  c.families = {{PointSubset(two, {0}), PointSubset(two, {1})}};
  c.scale = Distance(2);
  c.bound = Distance(0);
  c.n = 0;
  const auto p = product_cover(c, c);
  CHECK(p.k() == 1);
  CHECK(p.families[0].size() == 4);
  CHECK(p.bound == Distance(0));
  CHECK(verify_kcover(p).ok());
}

TEST_CASE("product of interval covers") {
  const auto line = interval_space(-12, 12);
  const auto all = PointSubset::all(line);
  for (const int r : {1, 2, 3}) {
    const auto cx = interval_cover(all, Distance(r), 3);
    CHECK(cx.bound == Distance(2 * r));
    CHECK(verify_kcover(cx).ok());
    const auto p = product_cover(cx, cx);
    CHECK(p.bound == Distance(4 * r));
    const auto rep = verify_kcover(p);
    CHECK(rep.ok());
    CHECK(rep.min_multiplicity >= 1);
    CHECK(rep.observed_bound <= Distance(4 * r));
  }
}

TEST_CASE("product pigeonhole on one point") {
  // x is in families 1 and 2, y in families 2 and 3: the point is covered by family 2
  const auto one = FiniteMetricSpace::from_matrix({"o"}, {0});
  const auto all = PointSubset::all(one);
  const auto none = PointSubset::none(one);
  KFamilyCover cx;
  cx.carrier = all;
  cx.families = {{all}, {all}, {}};
  cx.scale = Distance(1);
  cx.bound = Distance(0);
  cx.n = 1;
  KFamilyCover cy = cx;
  cy.families = {{}, {all}, {all}};
  const auto p = product_cover(cx, cy);
  CHECK(p.families[0].empty());
  CHECK(p.families[1].size() == 1);
  CHECK(p.families[2].empty());
  CHECK(verify_kcover(p).ok());
  (void)none;
}

TEST_CASE("product rejects mismatched covers") {
  const auto line = interval_space(0, 5);
  const auto a = interval_cover(PointSubset::all(line), Distance(1), 3);
  auto b = interval_cover(PointSubset::all(line), Distance(2), 3);
  CHECK_THROWS(product_cover(a, b));
  b = interval_cover(PointSubset::all(line), Distance(1), 2);
  CHECK_THROWS(product_cover(a, b));
}

TEST_CASE("neighborhood transfer") {
  const auto line = interval_space(-5, 15);
  const auto a = names(line, {0, 10});
  const auto out = neighborhood_transfer(a, {a}, Distance(1), Distance(2), Distance(0));
  CHECK(out.ok);
  CHECK(out.bound == Distance(4));
  CHECK(out.parts[0].names() == std::vector<std::string>{"(-2)", "(-1)", "(0)", "(1)", "(2)", "(8)", "(9)", "(10)",
                                                         "(11)", "(12)"});
  CHECK(out.observed[0] == Distance(4));

  const PointSubset lo(line, {line.at("(0)")});
  const PointSubset hi(line, {line.at("(10)")});
  const auto same = neighborhood_transfer(a, {lo, hi}, Distance(1), Distance(0), Distance(0));
  CHECK(same.ok);
  CHECK(same.parts[0] == lo);
  CHECK(same.parts[1] == hi);
  CHECK_THROWS_AS(neighborhood_transfer(a, {lo}, Distance(1), Distance(0), Distance(0)), PreconditionFailure);
  CHECK_THROWS_AS(neighborhood_transfer(a, {a}, Distance(1), Distance(5), Distance(0)), PreconditionFailure);
}

TEST_CASE("covers are deterministic") {
  const auto ball = zd_ball(2, 9);
  const auto base = brick_decomposer(2);
  const auto a = ostrand_tower(PointSubset::all(ball), base, 4, Distance(1));
  const auto b = ostrand_tower(PointSubset::all(ball), base, 4, Distance(1));
  CHECK(family_names(a) == family_names(b));
}
