#include <fstream>
#include <map>
#include <sstream>

#include "coarsedim/function_dim.hpp"
#include "coarsedim/gallery.hpp"
#include "doctest.h"

using namespace coarsedim;

namespace {

ScaleFunction projection(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  std::vector<PointId> map(x.size());
  for (PointId p = 0; p < x.size(); ++p) map[p] = y.at("(" + std::to_string(x.coordinates()->row(p)[0]) + ")");
  return {x, y, map};
}

ScaleFunction grid_projection(std::int64_t w, std::int64_t h) {
  CoordinateTable t;
  t.dims = 2;
  for (std::int64_t a = 0; a < w; ++a) {
    for (std::int64_t b = 0; b < h; ++b) {
      t.values.push_back(a);
      t.values.push_back(b);
    }
  }
  return projection(FiniteMetricSpace::from_coordinates(t), interval_space(0, w - 1));
}


}  // namespace

TEST_CASE("fiber expansion with k = m + 1 is the identity") {
  const auto inner = fiber_brick_decomposer(1);
  const auto same = fiber_ostrand_expand(inner, 2);
  CHECK(same.name == inner.name);
  CHECK(same.k == 2);
  CHECK(same.bound(Distance(3), Distance(5)) == Distance(11));
  CHECK_THROWS(fiber_ostrand_expand(inner, 1));
}

TEST_CASE("fiber expansion on strips of a projection") {
  const auto x = zd_ball(2, 20);
  const auto y = interval_space(-20, 20);
  const auto f = projection(x, y);
  const auto fiber = fiber_ostrand_expand(fiber_brick_decomposer(1), 3);
  CHECK(fiber.m == 1);
  CHECK(fiber.k == 3);
  for (const std::int64_t big_r : {0, 2, 5}) {
    CHECK(fiber.bound(Distance(1), Distance(big_r)) == fiber_brick_decomposer(1).bound(Distance(3), Distance(big_r)) +
                                                            Distance(2));
    CHECK(fiber.bound(Distance(1), Distance(big_r)) == Distance(8 + big_r));
    for (const std::int64_t lo : {-20, -3, 7}) {
      std::vector<std::string> ys;
      for (auto v = lo; v <= lo + big_r && v <= 20; ++v) ys.push_back("(" + std::to_string(v) + ")");
      const auto strip = f.preimage(PointSubset::from_names(y, ys));
      const auto cover = fiber.decompose(f, strip, Distance(1), Distance(big_r));
      const auto rep = verify_kcover(cover);
      CHECK(rep.ok());
      CHECK(rep.min_multiplicity >= 2);
      CHECK(cover.bound == Distance(8 + big_r));
    }
  }
}

TEST_CASE("pullback of a single point") {
  const auto f = grid_projection(5, 9);
  const auto fiber = fiber_ostrand_expand(fiber_brick_decomposer(1), 3);
  const PointSubset b(f.codomain(), {2});
  const auto out = pullback_cover(f, b, Distance(1), Distance(1), Distance(0), fiber);
  CHECK(out.ok);
  CHECK(out.pieces == 1);
  CHECK(out.carrier.size() == 9);
  CHECK(out.min_multiplicity >= 2);
  CHECK(out.parts.size() == 3);
}

TEST_CASE("pullback over two far apart points") {
  const auto f = grid_projection(8, 6);
  const auto fiber = fiber_brick_decomposer(1);
  const PointSubset b(f.codomain(), {1, 6});
  const auto out = pullback_cover(f, b, Distance(1), Distance(2), Distance(0), fiber);
  CHECK(out.ok);
  CHECK(out.pieces == 2);
  const auto single = pullback_cover(f, PointSubset(f.codomain(), {1}), Distance(1), Distance(2), Distance(0), fiber);
  for (std::size_t j = 0; j < out.parts.size(); ++j) {
    CHECK(single.parts[j].is_subset_of(out.parts[j]));
    CHECK(out.observed_x[j] == single.observed_x[j]);
  }
  CHECK_THROWS_AS(pullback_cover(f, PointSubset(f.codomain(), {1, 2}), Distance(1), Distance(2), Distance(0), fiber),
                  PreconditionFailure);
}

TEST_CASE("pullback on the segments space") {
  const auto seg = segments_space(4);
  const PointSubset b(seg.y, {seg.y.at("(4)"), seg.y.at("(8)")});
  const auto fiber = fiber_brick_decomposer(1);
  const auto out = pullback_cover(seg.f, b, Distance(1), Distance(1), Distance(0), fiber);
  CHECK(out.ok);
  CHECK(out.pieces == 2);
  CHECK(out.carrier.size() == 3 + 4);
}

TEST_CASE("cascade parameters for n = 1") {
  const BoundModel d_y = [](const Distance& r) { return Rational(8) * r; };
  const FiberBoundModel d_f = [](const Distance& r, const Distance& big) { return Rational(8) * r + big; };
  const auto p = cascade_params(Distance(1), 1, Distance(1), d_y, d_f);
  CHECK(p.c_f == Distance(2));
  CHECK(p.r_y[2] == Distance(2));
  CHECK(p.big_r_y[2] == Distance(16));
  CHECK(p.r_y[1] == Distance(48));
  CHECK(p.big_r_y[1] == Distance(384));
  CHECK(p.r_y[0] == Distance(1152));
  CHECK(p.big_r_y[0] == Distance(9216));
  CHECK(p.r_x[2] == Distance(1));
  CHECK(p.big_r_x[2] == Distance(24));
  CHECK(p.r_x[1] == Distance(72));
  CHECK(p.big_r_x[1] == Distance(960));
  CHECK(p.guaranteed() == Distance(2880));
  CHECK(p.padded.size() == 1);

  const auto always = cascade_params(Distance(1), 1, Distance(1), d_y, d_f, Padding::kAlways);
  CHECK(always.c_f == Distance(2));
  CHECK(always.big_r_y[2] == Distance(18));
}

TEST_CASE("cascade for n = 0 has two Y levels and one X level") {
  const BoundModel d_y = [](const Distance& r) { return Rational(2) * r; };
  const FiberBoundModel d_f = [](const Distance& r, const Distance& big) { return Rational(2) * r + big; };
  const auto p = cascade_params(Distance(3), 0, Distance(5), d_y, d_f);
  CHECK(p.r_y.size() == 2);
  CHECK(p.r_y[1] == Distance(5));
  CHECK(p.big_r_y[1] == Distance(10));
  CHECK(p.r_y[0] == Distance(30));
  CHECK(p.r_x[1] == Distance(3));
  CHECK(p.big_r_x[1] == Distance(16));
  CHECK(p.guaranteed() == Distance(48));
}

TEST_CASE("cascade sequences increase toward level 0") {
  const auto base = make_space_decomposer("brick:2", 4);
  const auto fiber = make_fiber_decomposer("brick:1", 4);
  for (const auto& r : {Distance(1), Distance(Rational(1, 3)), Distance(4)}) {
    const auto p = cascade_params(r, 2, r, base.bound, fiber.bound);
    for (std::size_t i = 0; i + 1 < p.r_y.size(); ++i) {
      CHECK(p.r_y[i] > p.r_y[i + 1]);
      CHECK(p.big_r_y[i] > p.big_r_y[i + 1]);
    }
    for (std::size_t i = 1; i + 1 < p.r_x.size(); ++i) {
      CHECK(p.r_x[i] > p.r_x[i + 1]);
      CHECK(p.big_r_x[i] > p.big_r_x[i + 1]);
    }
    for (std::size_t i = 0; i < p.r_y.size(); ++i) CHECK(p.big_r_y[i] > p.r_y[i]);
  }
}

TEST_CASE("cascade matches the committed fixture table") {
  std::ifstream in(std::string(COARSEDIM_FIXTURES) + "/cascade.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  std::map<std::string, CascadeParams> cache;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> c;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) c.push_back(cell);
    REQUIRE(c.size() == 8);
    const auto key = c[0] + c[1] + c[2] + c[3] + c[4];
    if (!cache.count(key)) {
      const auto n = static_cast<int>(decomposer_dimension(c[0]));
      const auto m = static_cast<int>(decomposer_dimension(c[1]));
      const int k = m + n + 1;
      const auto r = Distance::parse(c[2]);
      const Distance cf = c[3] == "identity" ? r : (c[3] == "double" ? Rational(2) * r : Distance(0));
      cache[key] = cascade_params(r, n, cf, make_space_decomposer(c[0], k).bound,
                                  make_fiber_decomposer(c[1], k).bound,
                                  c[4] == "always" ? Padding::kAlways : Padding::kWhenNeeded);
    }
    const auto& p = cache[key];
    const auto i = static_cast<std::size_t>(std::stoi(c[6]));
    const auto expected = Distance::parse(c[7]);
    Distance got;
    if (c[5] == "c_f") got = p.c_f;
    if (c[5] == "r_y") got = p.r_y.at(i);
    if (c[5] == "R_y") got = p.big_r_y.at(i);
    if (c[5] == "r_x") got = p.r_x.at(i);
    if (c[5] == "R_x") got = p.big_r_x.at(i);
    if (c[5] == "guaranteed") got = p.guaranteed();
    INFO(line);
    CHECK(got == expected);
    ++rows;
  }
  CHECK(rows > 1000);
}

TEST_CASE("hurewicz on a 3x3 grid over a path") {
  const auto f = grid_projection(3, 3);
  const auto base = make_space_decomposer("brick:1", 3);
  const auto fiber = make_fiber_decomposer("brick:1", 3);
  const auto h = hurewicz_combine(f, Distance(1), base, fiber);
  CHECK(h.parts.size() == 3);
  CHECK(h.cover_report.ok());
  CHECK(h.observed <= h.guaranteed);
  CHECK(h.ok());
  for (const auto& check : h.checks) {
    INFO(check.name << ": " << check.detail);
    CHECK(check.ok);
  }
  CHECK(h.cover.k() == 3);
  CHECK(h.cover.n == 2);
}

TEST_CASE("hurewicz on a one-point space") {
  const auto x = interval_space(0, 0);
  CoordinateTable t;
  t.dims = 2;
  t.values = {0, 0};
  const auto x2 = FiniteMetricSpace::from_coordinates(t);
  const ScaleFunction f(x2, x, {0});
  const auto h = hurewicz_combine(f, Distance(1), make_space_decomposer("brick:1", 3),
                                  make_fiber_decomposer("brick:1", 3));
  CHECK(h.ok());
  CHECK(h.observed == Distance(0));
}

TEST_CASE("hurewicz with unsaturated scales") {
  // A long thin domain keeps the base decomposition below the diameter at r^{(0)}_Y.
  CoordinateTable t;
  t.dims = 2;
  for (std::int64_t a = 0; a <= 6000; a += 3) {
    for (std::int64_t b = 0; b <= 2; ++b) {
      t.values.push_back(a);
      t.values.push_back(b);
    }
  }
  const auto x = FiniteMetricSpace::from_coordinates(t);
  CoordinateTable ty;
  ty.dims = 1;
  for (std::int64_t a = 0; a <= 6000; a += 3) ty.values.push_back(a);
  const auto y = FiniteMetricSpace::from_coordinates(ty);
  const auto f = projection(x, y);
  const auto h = hurewicz_combine(f, Distance(1), make_space_decomposer("interval", 3),
                                  make_fiber_decomposer("brick:1", 3));
  CHECK(!h.saturated);
  for (const auto& check : h.checks) {
    INFO(check.name << ": " << check.detail);
    CHECK(check.ok);
  }
  CHECK(h.observed <= h.guaranteed);
}

TEST_CASE("hurewicz rejects mismatched family counts") {
  const auto f = grid_projection(3, 3);
  CHECK_THROWS(hurewicz_combine(f, Distance(1), make_space_decomposer("brick:1", 2),
                                make_fiber_decomposer("brick:1", 3)));
}
