#include "coarsedim/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "coarsedim/components.hpp"
#include "coarsedim/covers.hpp"
#include "coarsedim/dim_estimate.hpp"
#include "coarsedim/function_dim.hpp"
#include "coarsedim/gallery.hpp"
#include "coarsedim/io.hpp"
#include "coarsedim/proptest.hpp"

namespace coarsedim {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  // shared
  std::string out;
  std::string report;
  bool timing = false;
  std::size_t max_points = Limits{}.max_points;
  std::uint64_t pair_budget = Limits{}.pair_budget;

  // inputs
  std::string space, cover, subset, domain, codomain, map, x, y, cover_x, cover_y, samples;
  std::string base, fiber, base_x, base_y, space_out, out_dir, codomain_out, map_out;
  std::string padding = "when-needed";
  std::vector<std::string> r;
  std::string rx, ry, big_ry;
  int k = 0;
  int parts = 2;
  bool csv = false;
  std::size_t oracle_cap = OracleOptions{}.max_points;
  std::string tolerance = "1/10";

  // gallery
  std::size_t d = 1;
  std::int64_t radius = 0, lo = 0, hi = 0, cutoff = 0;
  int n = 1;
  std::vector<std::int64_t> r_values;

  // proptest
  std::string suite;
  std::size_t cases = 0;
  std::uint64_t seed = 0;
};

class Session {
 public:
  Session(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {
    limits_.max_points = opt.max_points;
    limits_.pair_budget = opt.pair_budget;
  }

  [[nodiscard]] const Limits& limits() const noexcept { return limits_; }
  Json& report() noexcept { return report_; }

  void begin(const std::string& command) {
    report_["schema"] = kSchema;
    report_["kind"] = "report";
    report_["command"] = command;
    report_["inputs"] = Json::object();
    report_["parameters"] = Json::object();
    start_ = std::chrono::steady_clock::now();
  }

  Json load(const std::string& path, const std::string& role) {
    if (path.empty()) throw UsageError("missing --" + role);
    const auto text = read_file(path);
    report_["inputs"][role] = {{"digest", hex_digest(text)}};
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw FormatError("--" + role + " '" + path + "' is not valid JSON: " + e.what());
    }
  }

  FiniteMetricSpace load_space(const std::string& path, const std::string& role) {
    return space_from_json(load(path, role), limits_);
  }

  ScaleFunction load_map(const FiniteMetricSpace& domain, const FiniteMetricSpace& codomain) {
    return map_from_json(load(opt_.map, "map"), domain, codomain);
  }

  PointSubset load_subset(const FiniteMetricSpace& space, const std::string& path, const std::string& role) {
    if (path.empty()) return PointSubset::all(space);
    const auto j = load(path, role);
    const Json& list = j.is_object() ? j.at("points") : j;
    if (!list.is_array()) throw FormatError("--" + role + " must be a list of point names");
    std::vector<std::string> names;
    for (const auto& v : list) names.push_back(v.get<std::string>());
    return PointSubset::from_names(space, names);
  }

  void param(const std::string& key, Json value) { report_["parameters"][key] = std::move(value); }

  // Writes a document to `path` or, without a path, embeds it in the report.
  void artifact(const std::string& key, const Json& doc, const std::string& path) {
    if (path.empty()) {
      report_["outputs"][key] = doc;
    } else {
      write_file_atomic(path, doc.dump(2) + "\n");
      report_["outputs"][key] = {{"file", path}, {"digest", hex_digest(doc.dump(2) + "\n")}};
    }
  }

  int finish(bool ok, bool print = true) {
    report_["status"] = ok ? "ok" : "failed";
    if (opt_.timing) {
      const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      report_["timing"] = {{"seconds", secs}};
    }
    const auto text = report_.dump(2) + "\n";
    if (!opt_.report.empty()) write_file_atomic(opt_.report, text);
    if (print) out_ << text;
    return ok ? kExitOk : kExitFailed;
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  Limits limits_;
  Json report_;
  std::chrono::steady_clock::time_point start_;
};

Distance parse_scale(const std::string& text, const char* what) {
  try {
    return Distance::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad ") + what + " '" + text + "': " + e.what());
  }
}

std::vector<Distance> parse_grid(const std::vector<std::string>& values) {
  if (values.empty()) throw UsageError("missing --r");
  std::vector<Distance> out;
  for (const auto& v : values) out.push_back(parse_scale(v, "scale"));
  return out;
}

Json grid_json(const std::vector<Distance>& rs) {
  Json out = Json::array();
  for (const auto& r : rs) out.push_back(distance_to_json(r));
  return out;
}

Padding parse_padding(const std::string& text) {
  if (text == "when-needed") return Padding::kWhenNeeded;
  if (text == "always") return Padding::kAlways;
  throw UsageError("--padding must be when-needed or always");
}

int cmd_components(Session& s, const Options& opt) {
  s.begin("components");
  const auto space = s.load_space(opt.space, "space");
  const auto subset = s.load_subset(space, opt.subset, "subset");
  if (opt.r.size() != 1) throw UsageError("components takes exactly one --r");
  const auto r = parse_scale(opt.r[0], "--r");
  s.param("r", distance_to_json(r));
  const auto partition = r_components(subset, r);
  s.report()["summary"] = {{"points", subset.size()},
                           {"blocks", partition.size()},
                           {"max_diameter", distance_to_json(partition.max_diameter())}};
  s.artifact("partition", partition_to_json(partition), opt.out);
  return s.finish(true);
}

int cmd_double_components(Session& s, const Options& opt) {
  s.begin("double-components");
  const auto domain = s.load_space(opt.domain, "domain");
  const auto codomain = s.load_space(opt.codomain, "codomain");
  const auto f = s.load_map(domain, codomain);
  const auto subset = s.load_subset(domain, opt.subset, "subset");
  const auto r_x = parse_scale(opt.rx, "--rx");
  const auto r_y = parse_scale(opt.ry, "--ry");
  s.param("r_x", distance_to_json(r_x));
  s.param("r_y", distance_to_json(r_y));
  const auto partition = double_components(f, subset, r_x, r_y);
  Distance image(0);
  for (const auto& d : partition.image_diameters) image = max(image, d);
  s.report()["summary"] = {{"points", subset.size()},
                           {"blocks", partition.size()},
                           {"max_diameter", distance_to_json(partition.max_diameter())},
                           {"max_image_diameter", distance_to_json(image)}};
  s.artifact("partition", partition_to_json(partition), opt.out);
  return s.finish(true);
}

int cmd_verify(Session& s, const Options& opt) {
  s.begin("verify");
  const auto space = s.load_space(opt.space, "space");
  const auto cover = cover_from_json(s.load(opt.cover, "cover"), space);
  const auto report = verify_kcover(cover);
  s.param("scale", distance_to_json(cover.scale));
  s.param("bound", distance_to_json(cover.bound));
  s.param("n", cover.n);
  s.param("k", cover.k());
  s.report()["verification"] = cover_report_to_json(report, space);
  return s.finish(report.ok());
}

void record_cover(Session& s, const KFamilyCover& cover, const std::string& key, const std::string& path) {
  const auto report = verify_kcover(cover);
  s.report()["verification"] = cover_report_to_json(report, cover.space());
  s.artifact(key, cover_to_json(cover), path);
}

int cmd_ostrand(Session& s, const Options& opt) {
  s.begin("ostrand");
  const auto space = s.load_space(opt.space, "space");
  if (opt.r.size() != 1) throw UsageError("ostrand takes exactly one --r");
  const auto r = parse_scale(opt.r[0], "--r");
  s.param("r", distance_to_json(r));
  KFamilyCover out;
  Distance expected;
  if (!opt.cover.empty()) {
    const auto input = cover_from_json(s.load(opt.cover, "cover"), space);
    s.param("input_k", input.k());
    out = ostrand_expand(input, r);
    expected = input.bound + Rational(2) * r;
  } else {
    if (opt.base.empty() || opt.k <= 0) throw UsageError("ostrand needs --cover, or --base with --k");
    const auto dim = static_cast<int>(decomposer_dimension(opt.base));
    if (opt.k < dim + 1) throw UsageError("--k must be at least d + 1 for base " + opt.base);
    const auto base = make_space_decomposer(opt.base, dim + 1);
    s.param("base", opt.base);
    s.param("k", opt.k);
    out = ostrand_tower(PointSubset::all(space), base, opt.k, r);
    expected = ostrand_bound(base.bound, opt.k - dim - 1, r);
  }
  const auto report = verify_kcover(out);
  s.report()["summary"] = {{"k", out.k()},
                           {"bound", distance_to_json(out.bound)},
                           {"expected_bound", distance_to_json(expected)},
                           {"observed_bound", distance_to_json(report.observed_bound)},
                           {"min_multiplicity", report.min_multiplicity},
                           {"saturated", out.saturated}};
  record_cover(s, out, "cover", opt.out);
  return s.finish(report.ok() && out.bound == expected);
}

int cmd_product(Session& s, const Options& opt) {
  s.begin("product");
  const auto x = s.load_space(opt.x, "x");
  const auto y = s.load_space(opt.y, "y");
  KFamilyCover cx;
  KFamilyCover cy;
  if (!opt.cover_x.empty() || !opt.cover_y.empty()) {
    cx = cover_from_json(s.load(opt.cover_x, "cover-x"), x);
    cy = cover_from_json(s.load(opt.cover_y, "cover-y"), y);
  } else {
    if (opt.base_x.empty() || opt.base_y.empty() || opt.r.size() != 1) {
      throw UsageError("product needs --cover-x/--cover-y, or --base-x/--base-y with one --r");
    }
    const auto r = parse_scale(opt.r[0], "--r");
    const auto m = static_cast<int>(decomposer_dimension(opt.base_x));
    const auto n = static_cast<int>(decomposer_dimension(opt.base_y));
    const int k = m + n + 1;
    s.param("base_x", opt.base_x);
    s.param("base_y", opt.base_y);
    s.param("r", distance_to_json(r));
    s.param("k", k);
    cx = make_space_decomposer(opt.base_x, k).decompose(PointSubset::all(x), r);
    cy = make_space_decomposer(opt.base_y, k).decompose(PointSubset::all(y), r);
  }
  const auto out = product_cover(cx, cy, s.limits());
  const auto report = verify_kcover(out);
  s.report()["summary"] = {{"k", out.k()},
                           {"bound", distance_to_json(out.bound)},
                           {"bound_x", distance_to_json(cx.bound)},
                           {"bound_y", distance_to_json(cy.bound)},
                           {"observed_bound", distance_to_json(report.observed_bound)},
                           {"min_multiplicity", report.min_multiplicity}};
  if (!opt.space_out.empty()) s.artifact("space", space_to_json(out.space(), s.limits()), opt.space_out);
  record_cover(s, out, "cover", opt.out);
  return s.finish(report.ok() && report.observed_bound <= cx.bound + cy.bound);
}

Json subsets_json(std::span<const PointSubset> parts) {
  Json out = Json::array();
  for (const auto& p : parts) out.push_back(p.names());
  return out;
}

int cmd_pullback(Session& s, const Options& opt) {
  s.begin("pullback");
  const auto domain = s.load_space(opt.domain, "domain");
  const auto codomain = s.load_space(opt.codomain, "codomain");
  const auto f = s.load_map(domain, codomain);
  const auto b = s.load_subset(codomain, opt.subset, "subset");
  const auto r_x = parse_scale(opt.rx, "--rx");
  const auto r_y = parse_scale(opt.ry, "--ry");
  const auto big_r_y = opt.big_ry.empty() ? r_components(b, r_y).max_diameter() : parse_scale(opt.big_ry, "--big-ry");
  if (opt.fiber.empty()) throw UsageError("missing --fiber");
  const auto m = static_cast<int>(decomposer_dimension(opt.fiber));
  const int k = opt.k > 0 ? opt.k : m + 1;
  s.param("r_x", distance_to_json(r_x));
  s.param("r_y", distance_to_json(r_y));
  s.param("R_y", distance_to_json(big_r_y));
  s.param("fiber", opt.fiber);
  s.param("k", k);
  const auto result = pullback_cover(f, b, r_x, r_y, big_r_y, make_fiber_decomposer(opt.fiber, k));
  Json observed_x = Json::array();
  Json observed_y = Json::array();
  for (const auto& d : result.observed_x) observed_x.push_back(distance_to_json(d));
  for (const auto& d : result.observed_y) observed_y.push_back(distance_to_json(d));
  s.report()["summary"] = {{"pieces", result.pieces},
                           {"bound", distance_to_json(result.bound)},
                           {"observed_x", observed_x},
                           {"observed_y", observed_y},
                           {"min_multiplicity", result.min_multiplicity},
                           {"required_multiplicity", k - m}};
  Json doc = {{"schema", kSchema}, {"kind", "pullback"}, {"bound", distance_to_json(result.bound)},
              {"m", m},            {"k", k},             {"parts", subsets_json(result.parts)}};
  s.artifact("pullback", doc, opt.out);
  return s.finish(result.ok);
}

int cmd_hurewicz(Session& s, const Options& opt) {
  s.begin("hurewicz");
  const auto domain = s.load_space(opt.domain, "domain");
  const auto codomain = s.load_space(opt.codomain, "codomain");
  const auto f = s.load_map(domain, codomain);
  if (opt.base.empty() || opt.fiber.empty()) throw UsageError("hurewicz needs --base and --fiber");
  const auto rs = parse_grid(opt.r);
  const auto padding = parse_padding(opt.padding);
  const auto n = static_cast<int>(decomposer_dimension(opt.base));
  const auto m = static_cast<int>(decomposer_dimension(opt.fiber));
  const int k = m + n + 1;
  s.param("r", grid_json(rs));
  s.param("base", opt.base);
  s.param("fiber", opt.fiber);
  s.param("padding", opt.padding);
  s.param("m", m);
  s.param("n", n);
  s.param("k", k);
  if (!opt.out.empty() && rs.size() != 1) throw UsageError("--out takes a single --r; use --out-dir for a grid");
  const auto base = make_space_decomposer(opt.base, k);
  const auto fiber = make_fiber_decomposer(opt.fiber, k);
  bool all_ok = true;
  Json runs = Json::array();
  std::vector<ProfileSample> samples;
  for (const auto& r : rs) {
    const auto result = hurewicz_combine(f, r, base, fiber, padding);
    Json run;
    run["r"] = distance_to_json(r);
    run["cascade"] = cascade_to_json(result.cascade);
    run["guaranteed"] = distance_to_json(result.guaranteed);
    run["observed"] = distance_to_json(result.observed);
    run["saturated"] = result.saturated;
    Json checks = Json::array();
    for (const auto& c : result.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    run["checks"] = std::move(checks);
    run["cover_violations"] = result.cover_report.total_violations;
    run["ok"] = result.ok();
    all_ok = all_ok && result.ok();
    std::string path = opt.out;
    if (!opt.out_dir.empty()) {
      std::filesystem::create_directories(opt.out_dir);
      auto tag = r.str();
      std::replace(tag.begin(), tag.end(), '/', '_');
      path = (std::filesystem::path(opt.out_dir) / ("cover-r" + tag + ".json")).string();
    }
    const auto doc = cover_to_json(result.cover);
    if (path.empty()) {
      run["cover"] = doc;
    } else {
      write_file_atomic(path, doc.dump(2) + "\n");
      run["cover"] = {{"file", path}, {"digest", hex_digest(doc.dump(2) + "\n")}};
    }
    runs.push_back(std::move(run));
    ProfileSample sample;
    sample.r = r;
    sample.parts = k;
    sample.bound = result.observed;
    samples.push_back(sample);
  }
  s.report()["runs"] = std::move(runs);
  if (samples.size() >= 2) {
    try {
      s.report()["observed_model"] = model_to_json(fit_control_model(samples));
    } catch (const std::exception& e) {
      s.report()["observed_model"] = {{"error", e.what()}};
    }
  }
  return s.finish(all_ok);
}

int cmd_profile(Session& s, const Options& opt, std::ostream& out) {
  s.begin("profile");
  const auto space = s.load_space(opt.space, "space");
  const auto subset = s.load_subset(space, opt.subset, "subset");
  const auto rs = parse_grid(opt.r);
  if (opt.parts < 1) throw UsageError("--parts must be at least 1");
  s.param("r", grid_json(rs));
  s.param("parts", opt.parts);
  s.param("oracle_cap", opt.oracle_cap);
  OracleOptions oracle;
  oracle.max_points = opt.oracle_cap;
  const auto samples = control_profile(subset, rs, opt.parts, oracle);
  Json doc = {{"schema", kSchema}, {"kind", "profile"}, {"parts", opt.parts}, {"samples", samples_to_json(samples)}};
  try {
    if (samples.size() >= 2) doc["model"] = model_to_json(fit_control_model(samples));
  } catch (const std::exception& e) {
    doc["model"] = {{"error", e.what()}};
  }
  if (opt.csv) {
    if (opt.out.empty()) {
      if (doc.contains("model")) s.report()["model"] = doc["model"];
      const auto rc = s.finish(true, false);
      out << samples_to_csv(samples);
      return rc;
    }
    write_file_atomic(opt.out, samples_to_csv(samples));
    s.report()["outputs"]["profile"] = {{"file", opt.out}, {"format", "csv"}};
    if (doc.contains("model")) s.report()["model"] = doc["model"];
    return s.finish(true);
  }
  s.artifact("profile", doc, opt.out);
  return s.finish(true);
}

int cmd_fit(Session& s, const Options& opt) {
  s.begin("fit");
  if (opt.samples.empty()) throw UsageError("missing --samples");
  const auto text = read_file(opt.samples);
  s.report()["inputs"]["samples"] = {{"digest", hex_digest(text)}};
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<ProfileSample> samples;
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      samples = samples_from_json(Json::parse(text));
    } catch (const Json::parse_error& e) {
      throw FormatError(std::string("--samples is not valid JSON: ") + e.what());
    }
  } else {
    samples = samples_from_csv(text);
  }
  FitOptions fit;
  try {
    fit.tolerance = Rational::parse(opt.tolerance);
  } catch (const std::exception& e) {
    throw UsageError("bad --tolerance '" + opt.tolerance + "'");
  }
  s.param("tolerance", fit.tolerance.str());
  s.param("samples", samples.size());
  ControlModel model;
  try {
    model = fit_control_model(samples, fit);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  s.artifact("model", model_to_json(model), opt.out);
  return s.finish(true);
}

Json provenance(const GalleryParams& p, Json params) {
  Json out;
  out["generator"] = p.generator;
  out["params"] = std::move(params);
  out["points"] = p.points;
  if (p.cutoff > 0) {
    out["cutoff"] = p.cutoff;
    out["max_norm"] = p.max_norm;
    out["margin"] = p.cutoff;
  }
  if (!p.tower.r.empty()) out["tower"] = {{"r", p.tower.r}, {"s", p.tower.s}, {"t", p.tower.t}};
  return out;
}

std::int64_t max_norm_of(const FiniteMetricSpace& space) {
  std::int64_t best = 0;
  for (PointId p = 0; p < space.size(); ++p) best = std::max(best, truncation_norm(space, p));
  return best;
}

int cmd_gallery(Session& s, const Options& opt, const std::string& generator) {
  s.begin("gallery " + generator);
  GalleryParams gp;
  gp.generator = generator;
  Json params;
  FiniteMetricSpace space;
  if (generator == "zd-ball") {
    params = {{"d", opt.d}, {"radius", opt.radius}};
    space = zd_ball(opt.d, opt.radius, s.limits());
    gp.cutoff = opt.radius;
    gp.max_norm = opt.radius;
  } else if (generator == "interval") {
    params = {{"lo", opt.lo}, {"hi", opt.hi}};
    space = interval_space(opt.lo, opt.hi, s.limits());
  } else if (generator == "segments") {
    params = {{"n", opt.n}};
    gp.n_max = opt.n;
    const auto seg = segments_space(opt.n, s.limits());
    gp.points = seg.x.size();
    s.param("n", opt.n);
    auto doc = space_to_json(seg.x, s.limits());
    doc["provenance"] = provenance(gp, params);
    s.artifact("domain", doc, opt.out);
    auto ydoc = space_to_json(seg.y, s.limits());
    s.artifact("codomain", ydoc, opt.codomain_out);
    s.artifact("map", map_to_json(seg.f), opt.map_out);
    return s.finish(true);
  } else if (generator == "torsion") {
    params = {{"n", opt.n}, {"cutoff", opt.cutoff}};
    gp.n_max = opt.n;
    gp.cutoff = opt.cutoff;
    space = torsion_sum_space(opt.n, opt.cutoff, s.limits());
    gp.max_norm = max_norm_of(space);
  } else if (generator == "tower") {
    TowerRule rule = default_tower_rule;
    if (!opt.r_values.empty()) {
      if (opt.r_values.size() < static_cast<std::size_t>(opt.n)) throw UsageError("--r-values needs one value per level");
      const auto values = opt.r_values;
      rule = [values](int level) { return values[static_cast<std::size_t>(level - 1)]; };
    }
    params = {{"n", opt.n}, {"cutoff", opt.cutoff}, {"r_rule", opt.r_values.empty() ? "n+1" : "explicit"}};
    gp.n_max = opt.n;
    gp.cutoff = opt.cutoff;
    gp.tower = tower_params(opt.n, rule);
    space = nowak_tower_space(opt.n, opt.cutoff, gp.tower, s.limits());
    gp.max_norm = max_norm_of(space);
  } else {
    throw UsageError("unknown generator '" + generator + "'");
  }
  gp.points = space.size();
  for (auto it = params.begin(); it != params.end(); ++it) s.param(it.key(), it.value());
  auto doc = space_to_json(space, s.limits());
  doc["provenance"] = provenance(gp, params);
  s.artifact("space", doc, opt.out);
  return s.finish(true);
}

int cmd_proptest(Session& s, const Options& opt) {
  s.begin("proptest");
  s.param("suite", opt.suite);
  s.param("cases", opt.cases);
  s.param("seed", opt.seed);
  PropReport report;
  try {
    report = run_proptest(opt.suite, opt.cases, opt.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Json suites = Json::array();
  for (const auto& r : report.suites) {
    suites.push_back({{"suite", r.suite}, {"cases", r.cases}, {"violations", r.violations}, {"failures", r.failures}});
  }
  s.report()["suites"] = std::move(suites);
  return s.finish(report.ok());
}

void add_common(CLI::App* app, Options& opt) {
  app->add_option("--out", opt.out, "Write the primary artifact to this file");
  app->add_option("--report", opt.report, "Also write the run report to this file");
  app->add_flag("--timing", opt.timing, "Include wall-clock timing in the report");
  app->add_option("--max-points", opt.max_points, "Hard cap on the size of any constructed space");
  app->add_option("--pair-budget", opt.pair_budget, "Distance evaluations allowed when materializing a matrix");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Cover decompositions and dimension estimates for finite metric spaces", "coarsedim"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto* components = app.add_subcommand("components", "r-components of a space or subset");
  components->add_option("--space", opt.space, "Space document")->required();
  components->add_option("--r", opt.r, "Scale")->required();
  components->add_option("--subset", opt.subset, "JSON list of point names");

  auto* dbl = app.add_subcommand("double-components", "(r_X, r_Y)-components through a map");
  dbl->add_option("--domain", opt.domain)->required();
  dbl->add_option("--codomain", opt.codomain)->required();
  dbl->add_option("--map", opt.map)->required();
  dbl->add_option("--rx", opt.rx)->required();
  dbl->add_option("--ry", opt.ry)->required();
  dbl->add_option("--subset", opt.subset, "JSON list of domain point names");

  auto* verify = app.add_subcommand("verify", "Check a cover document");
  verify->add_option("--space", opt.space)->required();
  verify->add_option("--cover", opt.cover)->required();

  auto* ostrand = app.add_subcommand("ostrand", "Expand a cover by one family, or build a tower from a base");
  ostrand->add_option("--space", opt.space)->required();
  ostrand->add_option("--r", opt.r)->required();
  ostrand->add_option("--cover", opt.cover, "Input cover at scale 3r");
  ostrand->add_option("--base", opt.base, "Base decomposer, e.g. brick:2");
  ostrand->add_option("--k", opt.k, "Number of families for the tower");

  auto* product = app.add_subcommand("product", "Cover of X x Y with the sum metric");
  product->add_option("--x", opt.x)->required();
  product->add_option("--y", opt.y)->required();
  product->add_option("--cover-x", opt.cover_x);
  product->add_option("--cover-y", opt.cover_y);
  product->add_option("--base-x", opt.base_x);
  product->add_option("--base-y", opt.base_y);
  product->add_option("--r", opt.r);
  product->add_option("--space-out", opt.space_out, "Write the product space document");

  auto* pullback = app.add_subcommand("pullback", "Decompose the preimage of a codomain subset");
  pullback->add_option("--domain", opt.domain)->required();
  pullback->add_option("--codomain", opt.codomain)->required();
  pullback->add_option("--map", opt.map)->required();
  pullback->add_option("--subset", opt.subset, "JSON list of codomain point names (default: all)");
  pullback->add_option("--rx", opt.rx)->required();
  pullback->add_option("--ry", opt.ry)->required();
  pullback->add_option("--big-ry", opt.big_ry, "Declared bound on r_Y-components of the subset");
  pullback->add_option("--fiber", opt.fiber)->required();
  pullback->add_option("--k", opt.k, "Number of parts (default m + 1)");

  auto* hurewicz = app.add_subcommand("hurewicz", "Combine base and fiber decompositions into a cover of the domain");
  hurewicz->add_option("--domain", opt.domain)->required();
  hurewicz->add_option("--codomain", opt.codomain)->required();
  hurewicz->add_option("--map", opt.map)->required();
  hurewicz->add_option("--r", opt.r, "Scale grid")->required()->delimiter(',');
  hurewicz->add_option("--base", opt.base)->required();
  hurewicz->add_option("--fiber", opt.fiber)->required();
  hurewicz->add_option("--padding", opt.padding, "when-needed or always");
  hurewicz->add_option("--out-dir", opt.out_dir, "Write one cover per scale into this directory");

  auto* profile = app.add_subcommand("profile", "Per-scale minimal bounds at a fixed number of parts");
  profile->add_option("--space", opt.space)->required();
  profile->add_option("--r", opt.r, "Scale grid")->required()->delimiter(',');
  profile->add_option("--parts", opt.parts);
  profile->add_option("--subset", opt.subset);
  profile->add_option("--oracle-cap", opt.oracle_cap);
  profile->add_flag("--csv", opt.csv, "Emit samples as CSV");

  auto* fit = app.add_subcommand("fit", "Fit a control model to profile samples");
  fit->add_option("--samples", opt.samples, "CSV or JSON samples")->required();
  fit->add_option("--tolerance", opt.tolerance);

  auto* gallery = app.add_subcommand("gallery", "Generate example spaces");
  gallery->require_subcommand(1);
  auto* g_ball = gallery->add_subcommand("zd-ball", "l1 ball in Z^d");
  g_ball->add_option("--d", opt.d)->required();
  g_ball->add_option("--radius", opt.radius)->required();
  auto* g_interval = gallery->add_subcommand("interval", "Integers lo..hi");
  g_interval->add_option("--lo", opt.lo)->required();
  g_interval->add_option("--hi", opt.hi)->required();
  auto* g_segments = gallery->add_subcommand("segments", "Vertical segments over 2^n with their projection");
  g_segments->add_option("--n", opt.n)->required();
  g_segments->add_option("--codomain-out", opt.codomain_out);
  g_segments->add_option("--map-out", opt.map_out);
  auto* g_torsion = gallery->add_subcommand("torsion", "Norm ball in Z/2 + ... + Z/N");
  g_torsion->add_option("--n", opt.n)->required();
  g_torsion->add_option("--cutoff", opt.cutoff)->required();
  auto* g_tower = gallery->add_subcommand("tower", "Norm ball in the direct sum of scaled (Z/s(n))^{n+1}");
  g_tower->add_option("--n", opt.n)->required();
  g_tower->add_option("--cutoff", opt.cutoff)->required();
  g_tower->add_option("--r-values", opt.r_values, "r(1), ..., r(N)")->delimiter(',');

  auto* proptest = app.add_subcommand("proptest", "Randomized property suites");
  proptest->add_option("--suite", opt.suite)->required();
  proptest->add_option("--cases", opt.cases)->required();
  proptest->add_option("--seed", opt.seed)->required();

  for (auto* sub : {components, dbl, verify, ostrand, product, pullback, hurewicz, profile, fit, proptest}) {
    add_common(sub, opt);
  }
  for (auto* sub : {g_ball, g_interval, g_segments, g_torsion, g_tower}) add_common(sub, opt);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Session session(opt, out);
  try {
    if (components->parsed()) return cmd_components(session, opt);
    if (dbl->parsed()) return cmd_double_components(session, opt);
    if (verify->parsed()) return cmd_verify(session, opt);
    if (ostrand->parsed()) return cmd_ostrand(session, opt);
    if (product->parsed()) return cmd_product(session, opt);
    if (pullback->parsed()) return cmd_pullback(session, opt);
    if (hurewicz->parsed()) return cmd_hurewicz(session, opt);
    if (profile->parsed()) return cmd_profile(session, opt, out);
    if (fit->parsed()) return cmd_fit(session, opt);
    for (auto* sub : {g_ball, g_interval, g_segments, g_torsion, g_tower}) {
      if (sub->parsed()) return cmd_gallery(session, opt, sub->get_name());
    }
    if (proptest->parsed()) return cmd_proptest(session, opt);
  } catch (const PreconditionFailure& e) {
    err << "precondition failed: " << e.what() << "\n";
    session.report()["error"] = e.what();
    return session.finish(false);
  } catch (const TriangleViolation& e) {
    err << "error: triangle inequality fails for (" << e.a() << ", " << e.b() << ", " << e.c() << "): " << e.what()
        << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << "error: no command\n";
  return kExitUsage;
}

}  // namespace coarsedim
