#include "coarsedim/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "space_impl.hpp"

namespace coarsedim {

Json distance_to_json(const Distance& d) {
  if (d.is_rational() && d.rational().is_integer()) return d.rational().num();
  return d.str();
}

Distance distance_from_json(const Json& j) {
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0) throw FormatError("negative distance " + std::to_string(v));
    return Distance(v);
  }
  if (j.is_string()) {
    try {
      return Distance::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw FormatError("bad distance '" + j.get<std::string>() + "': " + e.what());
    }
  }
  throw FormatError("distance must be an integer or a string, got " + j.dump());
}

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<std::string> string_list(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be a list");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_number_integer()) {
      out.push_back(std::to_string(v.get<std::int64_t>()));
    } else {
      throw FormatError(std::string(what) + " entries must be strings");
    }
  }
  return out;
}

std::vector<std::string> optional_labels(const Json& j) {
  if (!j.contains("labels")) return {};
  return string_list(j.at("labels"), "labels");
}

void check_schema(const Json& j, std::string_view kind) {
  if (!j.is_object()) throw FormatError("document must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kSchema) {
    throw FormatError("unsupported schema " + j.at("schema").dump() + " (expected " + std::string(kSchema) + ")");
  }
  if (j.contains("kind") && j.at("kind") != kind) {
    throw FormatError("expected a " + std::string(kind) + " document, got " + j.at("kind").dump());
  }
}

Json header(std::string_view kind) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = kind;
  return j;
}

Json names_of(const PointSubset& s) {
  Json out = Json::array();
  for (const auto p : s) out.push_back(s.space().name(p));
  return out;
}

std::optional<std::string> cache_path(std::string_view key) {
  const char* dir = std::getenv("COARSEDIM_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return (std::filesystem::path(dir) / ("apsp-" + hex_digest(key) + ".json")).string();
}

FiniteMetricSpace graph_from_json(const Json& j) {
  auto names = string_list(field(j, "points"), "points");
  std::vector<FiniteMetricSpace::Edge> edges;
  const auto& ej = field(j, "edges");
  if (!ej.is_array()) throw FormatError("edges must be a list");
  for (const auto& e : ej) {
    if (!e.is_array() || e.size() != 3) throw FormatError("each edge must be [a, b, w]");
    const auto ab = string_list(Json::array({e[0], e[1]}), "edge endpoints");
    edges.push_back({ab[0], ab[1], distance_from_json(e[2])});
  }
  auto labels = optional_labels(j);

  Json key_doc = {{"points", j.at("points")}, {"edges", j.at("edges")}};
  const auto cached = cache_path(key_doc.dump());
  if (cached && std::filesystem::exists(*cached)) {
    try {
      const auto doc = read_json_file(*cached);
      const auto& rows = doc.at("matrix");
      std::vector<Distance> flat;
      for (const auto& row : rows) {
        for (const auto& v : row) flat.push_back(distance_from_json(v));
      }
      if (flat.size() == names.size() * names.size()) {
        auto impl = std::make_shared<detail::MatrixImpl>(std::move(names), std::move(flat), std::move(edges), true);
        if (!labels.empty()) {
          if (labels.size() != impl->size()) throw FormatError("label count mismatch");
          impl->labels = std::move(labels);
        }
        return FiniteMetricSpace(std::move(impl));
      }
    } catch (const std::exception&) {
      // unreadable cache entry: recompute below
    }
  }
  auto space = FiniteMetricSpace::from_graph(std::move(names), std::move(edges), std::move(labels));
  if (cached) {
    Json doc;
    Json rows = Json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
      Json row = Json::array();
      for (std::size_t q = 0; q < space.size(); ++q) {
        row.push_back(distance_to_json(space.distance(static_cast<PointId>(i), static_cast<PointId>(q))));
      }
      rows.push_back(std::move(row));
    }
    doc["matrix"] = std::move(rows);
    try {
      std::filesystem::create_directories(std::filesystem::path(*cached).parent_path());
      write_file_atomic(*cached, doc.dump());
    } catch (const std::exception&) {
      // caching is best effort
    }
  }
  return space;
}

}  // namespace

Json space_to_json(const FiniteMetricSpace& space, const Limits& limits) {
  Json j = header("space");
  if (const auto* t = space.coordinates()) {
    j["backing"] = "coords";
    j["norm"] = to_string(t->norm);
    if (space.has_explicit_names()) {
      j["points"] = names_of(PointSubset::all(space));
    }
    Json coords = Json::array();
    for (std::size_t i = 0; i < t->size(); ++i) {
      const auto row = t->row(i);
      coords.push_back(Json(std::vector<std::int64_t>(row.begin(), row.end())));
    }
    j["coords"] = std::move(coords);
    if (!t->weights.empty()) j["weights"] = t->weights;
    if (!t->moduli.empty()) j["moduli"] = t->moduli;
  } else if (const auto* edges = space.graph_edges()) {
    j["backing"] = "graph";
    j["points"] = names_of(PointSubset::all(space));
    Json ej = Json::array();
    for (const auto& e : *edges) ej.push_back(Json::array({e.a, e.b, distance_to_json(e.weight)}));
    j["edges"] = std::move(ej);
  } else {
    j["backing"] = "matrix";
    j["points"] = names_of(PointSubset::all(space));
    const auto flat = materialize_matrix(space, limits);
    const auto n = space.size();
    Json rows = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
      Json row = Json::array();
      for (std::size_t q = 0; q < n; ++q) row.push_back(distance_to_json(flat[i * n + q]));
      rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
  }
  if (space.has_labels()) {
    Json labels = Json::array();
    for (std::size_t i = 0; i < space.size(); ++i) labels.push_back(space.label(static_cast<PointId>(i)));
    j["labels"] = std::move(labels);
  }
  return j;
}

FiniteMetricSpace space_from_json(const Json& j, const Limits& limits) {
  check_schema(j, "space");
  const auto backing = field(j, "backing");
  if (!backing.is_string()) throw FormatError("backing must be a string");
  const auto b = backing.get<std::string>();
  if (b == "matrix") {
    auto names = string_list(field(j, "points"), "points");
    const auto& mj = field(j, "matrix");
    if (!mj.is_array()) throw FormatError("matrix must be a list");
    std::vector<Distance> flat;
    const auto n = names.size();
    if (mj.size() == n && (n == 0 || mj[0].is_array())) {
      for (const auto& row : mj) {
        if (!row.is_array() || row.size() != n) throw FormatError("matrix rows must have one entry per point");
        for (const auto& v : row) flat.push_back(distance_from_json(v));
      }
    } else {
      for (const auto& v : mj) flat.push_back(distance_from_json(v));
    }
    for (const auto& d : flat) {
      if (!d.is_rational()) throw FormatError("matrix entries must be rational");
    }
    if (n > limits.max_points) throw CapExceeded("matrix space exceeds the point cap");
    return FiniteMetricSpace::from_matrix(std::move(names), std::move(flat), optional_labels(j));
  }
  if (b == "graph") {
    if (field(j, "points").size() > limits.max_points) throw CapExceeded("graph space exceeds the point cap");
    return graph_from_json(j);
  }
  if (b == "coords") {
    const auto& cj = field(j, "coords");
    if (!cj.is_array()) throw FormatError("coords must be a list of integer rows");
    CoordinateTable t;
    t.norm = j.contains("norm") ? parse_norm(j.at("norm").get<std::string>()) : Norm::kL1;
    t.dims = cj.empty() ? 0 : cj[0].size();
    for (const auto& row : cj) {
      if (!row.is_array() || row.size() != t.dims) throw FormatError("coordinate rows must have equal length");
      for (const auto& v : row) {
        if (!v.is_number_integer()) throw FormatError("coordinates must be integers");
        t.values.push_back(v.get<std::int64_t>());
      }
    }
    if (t.dims == 0 && !cj.empty()) throw FormatError("coordinate rows must be nonempty");
    if (j.contains("weights")) t.weights = j.at("weights").get<std::vector<std::int64_t>>();
    if (j.contains("moduli")) t.moduli = j.at("moduli").get<std::vector<std::int64_t>>();
    std::vector<std::string> names;
    if (j.contains("points")) names = string_list(j.at("points"), "points");
    return FiniteMetricSpace::from_coordinates(std::move(t), std::move(names), optional_labels(j), limits);
  }
  throw FormatError("unknown backing '" + b + "' (expected matrix, graph or coords)");
}

Json cover_to_json(const KFamilyCover& cover) {
  Json j = header("cover");
  j["scale"] = distance_to_json(cover.scale);
  j["bound"] = distance_to_json(cover.bound);
  j["n"] = cover.n;
  j["k"] = cover.k();
  j["multiplicity"] = cover.multiplicity();
  if (cover.saturated) j["saturated"] = true;
  if (cover.carrier.size() != cover.space().size()) j["carrier"] = names_of(cover.carrier);
  Json families = Json::array();
  for (const auto& family : cover.families) {
    Json fam = Json::array();
    for (const auto& set : family) fam.push_back(names_of(set));
    families.push_back(std::move(fam));
  }
  j["families"] = std::move(families);
  return j;
}

KFamilyCover cover_from_json(const Json& j, const FiniteMetricSpace& space) {
  check_schema(j, "cover");
  KFamilyCover cover;
  cover.scale = distance_from_json(field(j, "scale"));
  cover.bound = distance_from_json(field(j, "bound"));
  cover.n = field(j, "n").get<int>();
  cover.saturated = j.value("saturated", false);
  auto subset = [&](const Json& names, const char* what) {
    const auto list = string_list(names, what);
    std::vector<PointId> ids;
    for (const auto& name : list) {
      const auto p = space.find(name);
      if (!p) throw FormatError("unknown point '" + name + "' in " + what);
      ids.push_back(*p);
    }
    return PointSubset(space, std::move(ids));
  };
  cover.carrier = j.contains("carrier") ? subset(j.at("carrier"), "carrier") : PointSubset::all(space);
  const auto& fj = field(j, "families");
  if (!fj.is_array()) throw FormatError("families must be a list");
  for (const auto& fam : fj) {
    if (!fam.is_array()) throw FormatError("each family must be a list of sets");
    std::vector<PointSubset> sets;
    for (const auto& set : fam) sets.push_back(subset(set, "cover set"));
    cover.families.push_back(std::move(sets));
  }
  if (j.contains("k") && j.at("k").get<std::size_t>() != cover.k()) {
    throw FormatError("declared k does not match the number of families");
  }
  return cover;
}

Json cover_report_to_json(const CoverReport& report, const FiniteMetricSpace& space) {
  Json j;
  j["ok"] = report.ok();
  j["violations"] = report.total_violations;
  j["observed_bound"] = distance_to_json(report.observed_bound);
  j["min_multiplicity"] = report.min_multiplicity;
  Json list = Json::array();
  for (const auto& v : report.violations) {
    Json e;
    e["kind"] = to_string(v.kind);
    switch (v.kind) {
      case CoverViolation::Kind::kClosePair:
        e["family"] = v.family + 1;
        e["sets"] = Json::array({v.set_a + 1, v.set_b + 1});
        e["points"] = Json::array({space.name(v.p), space.name(v.q)});
        e["distance"] = distance_to_json(v.value);
        break;
      case CoverViolation::Kind::kOversized:
        e["family"] = v.family + 1;
        e["set"] = v.set_a + 1;
        e["points"] = Json::array({space.name(v.p), space.name(v.q)});
        e["diameter"] = distance_to_json(v.value);
        break;
      case CoverViolation::Kind::kUndercovered:
        e["point"] = space.name(v.p);
        e["count"] = v.count;
        break;
      case CoverViolation::Kind::kOutsideCarrier:
        e["family"] = v.family + 1;
        e["set"] = v.set_a + 1;
        e["point"] = space.name(v.p);
        break;
      case CoverViolation::Kind::kMalformed:
        break;
    }
    e["message"] = v.message;
    list.push_back(std::move(e));
  }
  j["witnesses"] = std::move(list);
  return j;
}

Json partition_to_json(const ComponentPartition& partition) {
  Json j = header("partition");
  if (partition.double_parameter) {
    j["r_x"] = distance_to_json(partition.r_x);
    j["r_y"] = distance_to_json(partition.r_y);
  } else {
    j["r"] = distance_to_json(partition.r_x);
  }
  Json blocks = Json::array();
  Json diams = Json::array();
  for (std::size_t i = 0; i < partition.size(); ++i) {
    auto names = partition.blocks[i].names();
    std::sort(names.begin(), names.end());
    blocks.push_back(names);
    diams.push_back(distance_to_json(partition.diameters[i]));
  }
  j["blocks"] = std::move(blocks);
  j["diameters"] = std::move(diams);
  if (partition.double_parameter) {
    Json img = Json::array();
    for (const auto& d : partition.image_diameters) img.push_back(distance_to_json(d));
    j["image_diameters"] = std::move(img);
  }
  return j;
}

Json map_to_json(const ScaleFunction& f) {
  Json j = header("map");
  Json pairs = Json::array();
  for (std::size_t i = 0; i < f.map().size(); ++i) {
    pairs.push_back(Json::array({f.domain().name(static_cast<PointId>(i)), f.codomain().name(f.map()[i])}));
  }
  j["map"] = std::move(pairs);
  return j;
}

ScaleFunction map_from_json(const Json& j, const FiniteMetricSpace& domain, const FiniteMetricSpace& codomain) {
  check_schema(j, "map");
  const auto& mj = field(j, "map");
  std::vector<PointId> map(domain.size(), UINT32_MAX);
  auto put = [&](const std::string& from, const std::string& to) {
    const auto x = domain.find(from);
    if (!x) throw FormatError("map source '" + from + "' is not a domain point");
    const auto y = codomain.find(to);
    if (!y) throw FormatError("map target '" + to + "' is not a codomain point");
    if (map[*x] != UINT32_MAX && map[*x] != *y) throw FormatError("point '" + from + "' is mapped twice");
    map[*x] = *y;
  };
  if (mj.is_object()) {
    for (const auto& [k, v] : mj.items()) put(k, v.get<std::string>());
  } else if (mj.is_array()) {
    for (const auto& pair : mj) {
      if (!pair.is_array() || pair.size() != 2) throw FormatError("map entries must be [source, target]");
      put(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
  } else {
    throw FormatError("map must be an object or a list of pairs");
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] == UINT32_MAX) throw FormatError("map is not total: '" + domain.name(static_cast<PointId>(i)) + "'");
  }
  return {domain, codomain, std::move(map)};
}

Json cascade_to_json(const CascadeParams& p) {
  Json j;
  j["n"] = p.n;
  j["r"] = distance_to_json(p.r);
  j["c_f_raw"] = distance_to_json(p.c_f_raw);
  j["c_f"] = distance_to_json(p.c_f);
  j["padding"] = p.padding == Padding::kAlways ? "always" : "when-needed";
  Json levels = Json::array();
  for (std::size_t i = p.r_y.size(); i-- > 0;) {
    Json level;
    level["i"] = i;
    level["r_y"] = distance_to_json(p.r_y[i]);
    level["R_y"] = distance_to_json(p.big_r_y[i]);
    if (i >= 1) {
      level["r_x"] = distance_to_json(p.r_x[i]);
      level["R_x"] = distance_to_json(p.big_r_x[i]);
    }
    levels.push_back(std::move(level));
  }
  j["levels"] = std::move(levels);
  j["guaranteed"] = distance_to_json(p.guaranteed());
  j["padded"] = p.padded;
  return j;
}

Json model_to_json(const ControlModel& model) {
  Json j;
  j["kind"] = to_string(model.kind);
  Json coeffs = Json::array();
  for (const auto& c : model.coefficients) coeffs.push_back(c.is_integer() ? Json(c.num()) : Json(c.str()));
  j["coefficients"] = std::move(coeffs);
  j["formula"] = model.describe();
  if (model.residual) {
    j["residual"] = model.residual->str();
    j["residual_value"] = model.residual->to_double();
  } else {
    j["residual"] = "inf";
  }
  if (model.kind == ModelKind::kTabulated) j["table"] = samples_to_json(model.table);
  j["classification"] = "empirical";
  return j;
}

Json samples_to_json(std::span<const ProfileSample> samples) {
  Json out = Json::array();
  for (const auto& s : samples) {
    Json e;
    e["r"] = distance_to_json(s.r);
    if (s.big_r_y) e["R_y"] = distance_to_json(*s.big_r_y);
    e["parts"] = s.parts;
    e["bound"] = distance_to_json(s.bound);
    e["method"] = to_string(s.method);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ProfileSample> samples_from_json(const Json& j) {
  const Json* list = &j;
  if (j.is_object()) list = &field(j, "samples");
  if (!list->is_array()) throw FormatError("samples must be a list");
  std::vector<ProfileSample> out;
  for (const auto& e : *list) {
    ProfileSample s;
    if (e.is_array()) {
      if (e.size() == 2) {
        s.r = distance_from_json(e[0]);
        s.bound = distance_from_json(e[1]);
      } else if (e.size() == 3) {
        s.r = distance_from_json(e[0]);
        s.big_r_y = distance_from_json(e[1]);
        s.bound = distance_from_json(e[2]);
      } else {
        throw FormatError("sample rows must be [r, B] or [r, R_y, B]");
      }
    } else {
      s.r = distance_from_json(field(e, "r"));
      s.bound = distance_from_json(field(e, "bound"));
      if (e.contains("R_y")) s.big_r_y = distance_from_json(e.at("R_y"));
      s.parts = e.value("parts", 1);
      s.method = e.value("method", std::string("heuristic")) == "oracle" ? SampleMethod::kOracle
                                                                          : SampleMethod::kHeuristic;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string samples_to_csv(std::span<const ProfileSample> samples) {
  std::string out = "r,R_y,parts,B,method\n";
  for (const auto& s : samples) {
    out += s.r.str() + "," + (s.big_r_y ? s.big_r_y->str() : std::string()) + "," + std::to_string(s.parts) + "," +
           s.bound.str() + "," + std::string(to_string(s.method)) + "\n";
  }
  return out;
}

std::vector<ProfileSample> samples_from_csv(std::string_view text) {
  std::vector<ProfileSample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.empty() || cells[0] == "r") continue;
    ProfileSample s;
    try {
      if (cells.size() == 2) {
        s.r = Distance::parse(cells[0]);
        s.bound = Distance::parse(cells[1]);
      } else if (cells.size() == 3) {
        s.r = Distance::parse(cells[0]);
        s.big_r_y = Distance::parse(cells[1]);
        s.bound = Distance::parse(cells[2]);
      } else if (cells.size() >= 4) {
        s.r = Distance::parse(cells[0]);
        if (!cells[1].empty()) s.big_r_y = Distance::parse(cells[1]);
        s.parts = std::stoi(cells[2]);
        s.bound = Distance::parse(cells[3]);
        if (cells.size() >= 5 && cells[4] == "oracle") s.method = SampleMethod::kOracle;
      } else {
        throw FormatError("bad sample row '" + line + "'");
      }
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError("bad sample row '" + line + "': " + e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  const auto text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::filesystem::path target(path);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

}  // namespace coarsedim
