#include <cstdlib>
#include <filesystem>

#include "coarsedim/gallery.hpp"
#include "coarsedim/io.hpp"
#include "doctest.h"

using namespace coarsedim;
namespace fs = std::filesystem;

namespace {

void same_metric(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  REQUIRE(a.size() == b.size());
  for (PointId p = 0; p < a.size(); ++p) {
    CHECK(a.name(p) == b.name(p));
    for (PointId q = 0; q < a.size(); ++q) CHECK(a.distance(p, q) == b.distance(p, q));
  }
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("coarsedim-io-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("distance encoding") {
  CHECK(distance_to_json(Distance(3)) == Json(3));
  CHECK(distance_to_json(Distance(Rational(1, 2))) == Json("1/2"));
  CHECK(distance_to_json(Distance::infinity()) == Json("inf"));
  for (const auto& d : {Distance(0), Distance(Rational(-0, 1)), Distance(Rational(7, 3)), Distance::sqrt_of(Rational(5)),
                        Distance::infinity()}) {
    CHECK(distance_from_json(distance_to_json(d)) == d);
  }
  CHECK_THROWS(distance_from_json(Json(2.0)));
  CHECK_THROWS(distance_from_json(Json("x")));
  CHECK_THROWS(distance_from_json(Json(0.3)));
}

TEST_CASE("matrix documents") {
  const auto doc = Json::parse(R"({"kind":"space","backing":"matrix","points":["a","b","c"],
    "matrix":[[0,1,2],[1,0,"3/2"],[2,"3/2",0]],"labels":["p","q","p"]})");
  const auto s = space_from_json(doc);
  CHECK(s.distance(s.at("b"), s.at("c")) == Distance(Rational(3, 2)));
  CHECK(s.label(2) == "p");
  same_metric(s, space_from_json(space_to_json(s)));
  const auto flat = Json::parse(R"({"backing":"matrix","points":["a","b"],"matrix":[0,4,4,0]})");
  CHECK(space_from_json(flat).distance(0, 1) == Distance(4));
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"backing":"matrix","points":["a","b"],"matrix":[[0,1],[1]]})")),
                  FormatError);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"schema":"other/2","backing":"matrix","points":[],"matrix":[]})")),
                  FormatError);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"kind":"cover","backing":"matrix","points":[],"matrix":[]})")),
                  FormatError);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"backing":"tree"})")), FormatError);
  CHECK_THROWS_AS(
      space_from_json(Json::parse(R"({"backing":"matrix","points":["a","b","c"],"matrix":[[0,1,5],[1,0,1],[5,1,0]]})")),
      TriangleViolation);
}

TEST_CASE("graph documents and the distance cache") {
  const auto text = R"({"backing":"graph","points":["a","b","c","d"],"edges":[["a","b",1],["b","c","1/2"],["c","d",2]]})";
  const auto dir = scratch("cache");
  fs::remove_all(dir);
  fs::create_directories(dir);
  ::setenv("COARSEDIM_CACHE_DIR", dir.c_str(), 1);
  const auto first = space_from_json(Json::parse(text));
  CHECK(first.distance(first.at("a"), first.at("d")) == Distance(Rational(7, 2)));
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator()) == 1);
  const auto second = space_from_json(Json::parse(text));
  ::unsetenv("COARSEDIM_CACHE_DIR");
  same_metric(first, second);
  CHECK(second.backing() == Backing::kGraph);
  same_metric(first, space_from_json(space_to_json(first)));
  CHECK_THROWS(space_from_json(Json::parse(R"({"backing":"graph","points":["a","b"],"edges":[]})")));
}

TEST_CASE("coordinate documents") {
  const auto g = torsion_sum_space(4, 6);
  const auto back = space_from_json(space_to_json(g));
  CHECK(back.backing() == Backing::kCoords);
  same_metric(g, back);
  const auto l2 = Json::parse(R"({"backing":"coords","norm":"l2sq","coords":[[0,0],[3,4]]})");
  CHECK(space_from_json(l2).distance(0, 1) == Distance(5));
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"backing":"coords","coords":[[0,0.5]]})")), FormatError);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"backing":"coords","coords":[[0,1],[2]]})")), FormatError);
  Limits tight;
  tight.max_points = 3;
  CHECK_THROWS_AS(space_from_json(space_to_json(g), tight), CapExceeded);
}

TEST_CASE("cover round trip") {
  const auto x = interval_space(0, 30);
  const auto c = brick_decomposer(1).decompose(PointSubset::all(x), Distance(2));
  const auto j = cover_to_json(c);
  CHECK(j["schema"] == "coarsedim/1");
  CHECK(j["kind"] == "cover");
  const auto back = cover_from_json(j, x);
  CHECK(back.k() == c.k());
  CHECK(back.bound == c.bound);
  CHECK(back.scale == c.scale);
  for (std::size_t i = 0; i < c.k(); ++i) {
    REQUIRE(back.families[i].size() == c.families[i].size());
    for (std::size_t s = 0; s < c.families[i].size(); ++s) CHECK(back.families[i][s] == c.families[i][s]);
  }
  CHECK(cover_to_json(back) == j);
  auto bad = j;
  bad["families"][0][0].push_back("(99)");
  CHECK_THROWS(cover_from_json(bad, x));

  auto broken = c;
  broken.bound = Distance(1);
  const auto rj = cover_report_to_json(verify_kcover(broken), x);
  CHECK(rj["ok"] == false);
  CHECK(rj["violations"].get<std::size_t>() > 0);
  CHECK(rj["witnesses"][0]["kind"] == "oversized");
  CHECK(rj["witnesses"][0]["family"].get<int>() >= 1);
}

TEST_CASE("maps and partitions") {
  const auto seg = segments_space(3);
  const auto j = map_to_json(seg.f);
  const auto back = map_from_json(j, seg.x, seg.y);
  CHECK(back.map() == seg.f.map());
  Json pairs = {{"map", Json::array()}};
  for (PointId p = 0; p < seg.x.size(); ++p) pairs["map"].push_back({seg.x.name(p), seg.y.name(seg.f(p))});
  CHECK(map_from_json(pairs, seg.x, seg.y).map() == seg.f.map());
  pairs["map"].erase(pairs["map"].begin());
  CHECK_THROWS(map_from_json(pairs, seg.x, seg.y));

  const auto parts = r_components(PointSubset::all(seg.x), Distance(1));
  const auto pj = partition_to_json(parts);
  CHECK(pj["blocks"].size() == 3);
  CHECK(pj["blocks"][0][0] == "(2,0)");
}

TEST_CASE("samples in CSV and JSON") {
  std::vector<ProfileSample> s(3);
  s[0].r = Distance(1);
  s[0].bound = Distance(2);
  s[0].method = SampleMethod::kOracle;
  s[1].r = Distance(Rational(5, 2));
  s[1].bound = Distance(7);
  s[1].parts = 3;
  s[2].r = Distance(4);
  s[2].big_r_y = Distance(6);
  s[2].bound = Distance(Rational(1, 3));
  for (const auto& back : {samples_from_csv(samples_to_csv(s)), samples_from_json(samples_to_json(s))}) {
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(back[i].r == s[i].r);
      CHECK(back[i].bound == s[i].bound);
      CHECK(back[i].parts == s[i].parts);
      CHECK(back[i].method == s[i].method);
      CHECK(back[i].big_r_y == s[i].big_r_y);
    }
  }
  const auto two = samples_from_csv("r,bound\n1,5\n2,10\n");
  REQUIRE(two.size() == 2);
  CHECK(two[1].bound == Distance(10));
  const auto three = samples_from_csv("1,2,9\n");
  CHECK(three[0].big_r_y == Distance(2));
  CHECK_THROWS_AS(samples_from_csv("1\n"), FormatError);
  CHECK_THROWS_AS(samples_from_csv("1,x\n"), FormatError);
}

TEST_CASE("models and cascades") {
  ControlModel m;
  m.kind = ModelKind::kLinear;
  m.coefficients = {Rational(5), Rational(2)};
  m.residual = Rational(0);
  const auto j = model_to_json(m);
  CHECK(j["classification"] == "empirical");
  CHECK(j["kind"] == "linear");

  const auto p = cascade_params(Distance(1), 1, Distance(1), [](const Distance& r) { return Rational(8) * r; },
                                [](const Distance& r, const Distance& big) { return Rational(8) * r + big; });
  const auto cj = cascade_to_json(p);
  CHECK(cj["guaranteed"] == 2880);
  CHECK(cj["levels"].size() == 3);
  CHECK(cj["levels"][0]["i"] == 2);
}

TEST_CASE("files and digests") {
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex_digest("a") == "af63dc4c8601ec8c");
  const auto path = scratch("out.json");
  write_file_atomic(path.string(), "{\"x\": 1}");
  CHECK(read_json_file(path.string())["x"] == 1);
  write_file_atomic(path.string(), "{\"x\": 2}");
  CHECK(read_file(path.string()) == "{\"x\": 2}");
  CHECK_THROWS(read_file((path.parent_path() / "missing.json").string()));
  write_file_atomic(path.string(), "{oops");
  CHECK_THROWS_AS(read_json_file(path.string()), FormatError);
  fs::remove_all(path.parent_path());
}
