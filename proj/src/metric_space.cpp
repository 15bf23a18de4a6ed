#include "coarsedim/metric_space.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <queue>

#include "proximity.hpp"
#include "space_impl.hpp"

namespace coarsedim {

std::string_view to_string(Backing backing) {
  switch (backing) {
    case Backing::kMatrix:
      return "matrix";
    case Backing::kGraph:
      return "graph";
    case Backing::kCoords:
      return "coords";
    case Backing::kProduct:
      return "product";
    case Backing::kSubspace:
      return "subspace";
  }
  return "unknown";
}

std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::kL1:
      return "l1";
    case Norm::kL2Squared:
      return "l2sq";
    case Norm::kSup:
      return "sup";
  }
  return "unknown";
}

Norm parse_norm(std::string_view text) {
  if (text == "l1") return Norm::kL1;
  if (text == "l2sq") return Norm::kL2Squared;
  if (text == "sup") return Norm::kSup;
  throw InvalidSpace("unknown norm '" + std::string(text) + "' (expected l1, l2sq or sup)");
}

bool CoordinateTable::is_plain() const noexcept {
  return std::all_of(weights.begin(), weights.end(), [](auto w) { return w == 1; }) &&
         std::all_of(moduli.begin(), moduli.end(), [](auto m) { return m == 0; });
}

std::int64_t CoordinateTable::axis_gap(std::size_t axis, std::int64_t a, std::int64_t b) const noexcept {
  std::int64_t t = a > b ? a - b : b - a;
  if (const auto m = modulus(axis); m != 0) {
    t %= m;
    t = std::min(t, m - t);
  }
  return weight(axis) * t;
}

std::int64_t CoordinateTable::raw_distance(std::size_t i, std::size_t j) const noexcept {
  const std::int64_t* a = values.data() + i * dims;
  const std::int64_t* b = values.data() + j * dims;
  std::int64_t acc = 0;
  if (moduli.empty() && weights.empty()) {
    switch (norm) {
      case Norm::kL1:
        for (std::size_t k = 0; k < dims; ++k) acc += a[k] > b[k] ? a[k] - b[k] : b[k] - a[k];
        return acc;
      case Norm::kSup:
        for (std::size_t k = 0; k < dims; ++k) acc = std::max(acc, a[k] > b[k] ? a[k] - b[k] : b[k] - a[k]);
        return acc;
      case Norm::kL2Squared:
        for (std::size_t k = 0; k < dims; ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
        return acc;
    }
  }
  for (std::size_t k = 0; k < dims; ++k) {
    const auto g = axis_gap(k, a[k], b[k]);
    switch (norm) {
      case Norm::kL1:
        acc += g;
        break;
      case Norm::kSup:
        acc = std::max(acc, g);
        break;
      case Norm::kL2Squared:
        acc += g * g;
        break;
    }
  }
  return acc;
}

namespace detail {

std::optional<PointId> SpaceImpl::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void SpaceImpl::set_names(std::vector<std::string> names) {
  names_ = std::move(names);
  index_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], static_cast<PointId>(i)).second) {
      throw InvalidSpace("duplicate point name '" + names_[i] + "'");
    }
  }
}

MatrixImpl::MatrixImpl(std::vector<std::string> names, std::vector<Distance> matrix,
                       std::vector<FiniteMetricSpace::Edge> edges, bool graph)
    : n_(names.size()), matrix_(std::move(matrix)), edges_(std::move(edges)), graph_(graph) {
  set_names(std::move(names));
}

std::string coordinate_name(std::span<const std::int64_t> coords) {
  std::string out = "(";
  for (std::size_t a = 0; a < coords.size(); ++a) {
    if (a > 0) out += ',';
    out += std::to_string(coords[a]);
  }
  out += ')';
  return out;
}

CoordsImpl::CoordsImpl(CoordinateTable table, std::vector<std::string> names) : table_(std::move(table)) {
  const auto n = table_.size();
  for (std::size_t a = 0; a < table_.dims; ++a) {
    if (const auto m = table_.modulus(a); m != 0) {
      for (std::size_t i = 0; i < n; ++i) {
        auto& v = table_.values[i * table_.dims + a];
        v = ((v % m) + m) % m;
      }
    }
  }
  sorted_.resize(n);
  std::iota(sorted_.begin(), sorted_.end(), PointId{0});
  std::sort(sorted_.begin(), sorted_.end(), [&](PointId a, PointId b) {
    const auto ra = table_.row(a);
    const auto rb = table_.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  for (std::size_t i = 1; i < n; ++i) {
    const auto ra = table_.row(sorted_[i - 1]);
    const auto rb = table_.row(sorted_[i]);
    if (std::equal(ra.begin(), ra.end(), rb.begin())) {
      throw InvalidSpace("duplicate coordinates " + coordinate_name(ra));
    }
  }
  if (!names.empty()) set_names(std::move(names));
}

Distance CoordsImpl::distance(PointId p, PointId q) const {
  const auto raw = table_.raw_distance(p, q);
  if (table_.norm == Norm::kL2Squared) return Distance::sqrt_of(Rational(raw));
  return Distance(raw);
}

bool CoordsImpl::within(PointId p, PointId q, const Distance& r) const {
  if (r.is_infinite()) return true;
  const auto raw = table_.raw_distance(p, q);
  if (table_.norm == Norm::kL2Squared) return Rational(raw) <= r.square();
  return Distance(raw) <= r;
}

std::string CoordsImpl::name(PointId p) const {
  if (!names_.empty()) return names_[p];
  return coordinate_name(table_.row(p));
}

std::optional<PointId> CoordsImpl::find_coords(std::span<const std::int64_t> coords) const {
  if (coords.size() != table_.dims) return std::nullopt;
  std::vector<std::int64_t> key(coords.begin(), coords.end());
  for (std::size_t a = 0; a < key.size(); ++a) {
    if (const auto m = table_.modulus(a); m != 0) key[a] = ((key[a] % m) + m) % m;
  }
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), key, [&](PointId p, const auto& k) {
    const auto row = table_.row(p);
    return std::lexicographical_compare(row.begin(), row.end(), k.begin(), k.end());
  });
  if (it == sorted_.end()) return std::nullopt;
  const auto row = table_.row(*it);
  if (!std::equal(row.begin(), row.end(), key.begin())) return std::nullopt;
  return *it;
}

std::optional<PointId> CoordsImpl::find(std::string_view name) const {
  if (!names_.empty()) return SpaceImpl::find(name);
  if (name.size() < 2 || name.front() != '(' || name.back() != ')') return std::nullopt;
  std::vector<std::int64_t> coords;
  std::string_view body = name.substr(1, name.size() - 2);
  while (!body.empty()) {
    const auto comma = body.find(',');
    const auto part = body.substr(0, comma);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size()) return std::nullopt;
    coords.push_back(v);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  const auto id = find_coords(coords);
  if (!id) return std::nullopt;
  // reject non-canonical spellings such as "(17)" for a point stored as "(1)" mod 16
  if (coordinate_name(table_.row(*id)) != name) return std::nullopt;
  return id;
}

ProductImpl::ProductImpl(FiniteMetricSpace x, FiniteMetricSpace y)
    : factors_(std::move(x), std::move(y)), nx_(factors_.first.size()), ny_(factors_.second.size()) {
  std::vector<std::string> names;
  names.reserve(nx_ * ny_);
  for (std::size_t i = 0; i < nx_; ++i) {
    const auto xn = factors_.first.name(static_cast<PointId>(i));
    for (std::size_t j = 0; j < ny_; ++j) {
      names.push_back("(" + xn + "," + factors_.second.name(static_cast<PointId>(j)) + ")");
    }
  }
  set_names(std::move(names));
}

Distance ProductImpl::distance(PointId p, PointId q) const {
  const auto xp = static_cast<PointId>(p / ny_);
  const auto yp = static_cast<PointId>(p % ny_);
  const auto xq = static_cast<PointId>(q / ny_);
  const auto yq = static_cast<PointId>(q % ny_);
  return factors_.first.distance(xp, xq) + factors_.second.distance(yp, yq);
}

SubspaceImpl::SubspaceImpl(FiniteMetricSpace parent, std::vector<PointId> ids)
    : parent_(std::move(parent)), ids_(std::move(ids)) {
  std::vector<std::string> names;
  names.reserve(ids_.size());
  for (const auto p : ids_) names.push_back(parent_.name(p));
  set_names(std::move(names));
  if (parent_.has_labels()) {
    for (const auto p : ids_) labels.push_back(parent_.label(p));
  }
}

}  // namespace detail

namespace {

void attach_labels(detail::SpaceImpl& impl, std::vector<std::string> labels) {
  if (labels.empty()) return;
  if (labels.size() != impl.size()) {
    throw InvalidSpace("expected " + std::to_string(impl.size()) + " labels, got " + std::to_string(labels.size()));
  }
  impl.labels = std::move(labels);
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace()
    : impl_(std::make_shared<detail::MatrixImpl>(std::vector<std::string>{}, std::vector<Distance>{},
                                                 std::vector<Edge>{}, false)) {}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<std::string> names, std::vector<Distance> matrix,
                                                 std::vector<std::string> labels) {
  const std::size_t n = names.size();
  if (matrix.size() != n * n) {
    throw InvalidSpace("matrix has " + std::to_string(matrix.size()) + " entries, expected " +
                       std::to_string(n * n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& d = matrix[i * n + j];
      if (!d.is_finite()) throw InvalidSpace("infinite distance between '" + names[i] + "' and '" + names[j] + "'");
      if (i == j && !d.is_zero()) throw InvalidSpace("nonzero self-distance at '" + names[i] + "'");
      if (i != j && d.is_zero()) {
        throw InvalidSpace("distinct points '" + names[i] + "' and '" + names[j] + "' at distance 0");
      }
      if (d != matrix[j * n + i]) {
        throw InvalidSpace("asymmetric matrix: d(" + names[i] + "," + names[j] + ")=" + d.str() + " but d(" +
                           names[j] + "," + names[i] + ")=" + matrix[j * n + i].str());
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t c = 0; c < n; ++c) {
      if (a == c) continue;
      const auto& ac = matrix[a * n + c];
      for (std::size_t b = 0; b < n; ++b) {
        if (b == a || b == c) continue;
        if (ac > matrix[a * n + b] + matrix[b * n + c]) {
          throw TriangleViolation(names[a], names[b], names[c],
                                  "triangle inequality violated: d(" + names[a] + "," + names[c] + ")=" + ac.str() +
                                      " > d(" + names[a] + "," + names[b] + ")+d(" + names[b] + "," + names[c] +
                                      ")=" + (matrix[a * n + b] + matrix[b * n + c]).str());
        }
      }
    }
  }
  auto impl = std::make_shared<detail::MatrixImpl>(std::move(names), std::move(matrix), std::vector<Edge>{}, false);
  attach_labels(*impl, std::move(labels));
  return FiniteMetricSpace(std::move(impl));
}

FiniteMetricSpace FiniteMetricSpace::from_graph(std::vector<std::string> names, std::vector<Edge> edges,
                                                std::vector<std::string> labels) {
  const std::size_t n = names.size();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(names[i], i).second) throw InvalidSpace("duplicate point name '" + names[i] + "'");
  }
  std::vector<std::vector<std::pair<std::size_t, Distance>>> adjacency(n);
  for (const auto& e : edges) {
    const auto ia = index.find(e.a);
    const auto ib = index.find(e.b);
    if (ia == index.end() || ib == index.end()) {
      throw InvalidSpace("edge references unknown point '" + (ia == index.end() ? e.a : e.b) + "'");
    }
    if (!e.weight.is_rational() || e.weight.is_zero()) {
      throw InvalidSpace("edge " + e.a + "-" + e.b + " needs a positive rational weight, got " + e.weight.str());
    }
    adjacency[ia->second].emplace_back(ib->second, e.weight);
    adjacency[ib->second].emplace_back(ia->second, e.weight);
  }
  std::vector<Distance> matrix(n * n, Distance::infinity());
  using Item = std::pair<Distance, std::size_t>;
  for (std::size_t s = 0; s < n; ++s) {
    auto* row = matrix.data() + s * n;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    row[s] = Distance(0);
    heap.emplace(Distance(0), s);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > row[u]) continue;
      for (const auto& [v, w] : adjacency[u]) {
        const auto nd = d + w;
        if (nd < row[v]) {
          row[v] = nd;
          heap.emplace(nd, v);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (row[t].is_infinite()) {
        throw InvalidSpace("graph is disconnected: no path from '" + names[s] + "' to '" + names[t] + "'");
      }
    }
  }
  auto impl = std::make_shared<detail::MatrixImpl>(std::move(names), std::move(matrix), std::move(edges), true);
  attach_labels(*impl, std::move(labels));
  return FiniteMetricSpace(std::move(impl));
}

FiniteMetricSpace FiniteMetricSpace::from_coordinates(CoordinateTable table, std::vector<std::string> names,
                                                      std::vector<std::string> labels, const Limits& limits) {
  if (table.dims == 0 && !table.values.empty()) throw InvalidSpace("coordinates with zero dimensions");
  if (table.dims != 0 && table.values.size() % table.dims != 0) throw InvalidSpace("ragged coordinate table");
  if (!table.weights.empty() && table.weights.size() != table.dims) throw InvalidSpace("weights length mismatch");
  if (!table.moduli.empty() && table.moduli.size() != table.dims) throw InvalidSpace("moduli length mismatch");
  if (std::any_of(table.weights.begin(), table.weights.end(), [](auto w) { return w < 1; })) {
    throw InvalidSpace("coordinate weights must be positive integers");
  }
  if (std::any_of(table.moduli.begin(), table.moduli.end(), [](auto m) { return m < 0; })) {
    throw InvalidSpace("coordinate moduli must be nonnegative");
  }
  if (table.size() > limits.max_points) {
    throw CapExceeded("coordinate space with " + std::to_string(table.size()) + " points exceeds cap " +
                      std::to_string(limits.max_points));
  }
  if (!names.empty() && names.size() != table.size()) {
    throw InvalidSpace("expected " + std::to_string(table.size()) + " point names, got " +
                       std::to_string(names.size()));
  }
  auto impl = std::make_shared<detail::CoordsImpl>(std::move(table), std::move(names));
  attach_labels(*impl, std::move(labels));
  return FiniteMetricSpace(std::move(impl));
}

std::size_t FiniteMetricSpace::size() const noexcept { return impl_->size(); }
Backing FiniteMetricSpace::backing() const noexcept { return impl_->backing(); }
std::string FiniteMetricSpace::name(PointId p) const { return impl_->name(p); }
std::optional<PointId> FiniteMetricSpace::find(std::string_view name) const { return impl_->find(name); }

PointId FiniteMetricSpace::at(std::string_view name) const {
  if (const auto p = impl_->find(name)) return *p;
  throw std::out_of_range("unknown point '" + std::string(name) + "'");
}

bool FiniteMetricSpace::has_explicit_names() const noexcept { return impl_->has_explicit_names(); }
bool FiniteMetricSpace::has_labels() const noexcept { return !impl_->labels.empty(); }
std::string FiniteMetricSpace::label(PointId p) const { return impl_->labels.empty() ? std::string{} : impl_->labels[p]; }
Distance FiniteMetricSpace::distance(PointId p, PointId q) const { return impl_->distance(p, q); }
bool FiniteMetricSpace::within(PointId p, PointId q, const Distance& r) const { return impl_->within(p, q, r); }
const CoordinateTable* FiniteMetricSpace::coordinates() const noexcept { return impl_->coordinates(); }
const std::vector<FiniteMetricSpace::Edge>* FiniteMetricSpace::graph_edges() const noexcept {
  return impl_->graph_edges();
}

std::optional<std::pair<FiniteMetricSpace, FiniteMetricSpace>> FiniteMetricSpace::factors() const {
  if (const auto* f = impl_->factors()) return *f;
  return std::nullopt;
}

// ---- PointSubset ----------------------------------------------------------

PointSubset::PointSubset(FiniteMetricSpace space, std::vector<PointId> ids)
    : space_(std::move(space)), ids_(std::move(ids)) {
  if (!std::is_sorted(ids_.begin(), ids_.end())) std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  if (!ids_.empty() && ids_.back() >= space_.size()) {
    throw std::out_of_range("point id " + std::to_string(ids_.back()) + " not in space of size " +
                            std::to_string(space_.size()));
  }
}

PointSubset PointSubset::all(const FiniteMetricSpace& space) {
  std::vector<PointId> ids(space.size());
  std::iota(ids.begin(), ids.end(), PointId{0});
  return {space, std::move(ids)};
}

PointSubset PointSubset::from_names(const FiniteMetricSpace& space, std::span<const std::string> names) {
  std::vector<PointId> ids;
  ids.reserve(names.size());
  for (const auto& n : names) ids.push_back(space.at(n));
  return {space, std::move(ids)};
}

bool PointSubset::contains(PointId p) const noexcept { return std::binary_search(ids_.begin(), ids_.end(), p); }

std::vector<std::string> PointSubset::names() const {
  std::vector<std::string> out;
  out.reserve(ids_.size());
  for (const auto p : ids_) out.push_back(space_.name(p));
  return out;
}

PointSubset PointSubset::unite(const PointSubset& other) const {
  std::vector<PointId> out;
  out.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out));
  return {space_.size() >= other.space_.size() ? space_ : other.space_, std::move(out)};
}

PointSubset PointSubset::intersect(const PointSubset& other) const {
  std::vector<PointId> out;
  std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out));
  return {space_, std::move(out)};
}

PointSubset PointSubset::minus(const PointSubset& other) const {
  std::vector<PointId> out;
  std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out));
  return {space_, std::move(out)};
}

bool PointSubset::is_subset_of(const PointSubset& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

// ---- operations ------------------------------------------------------------

FiniteMetricSpace product_sum(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const Limits& limits) {
  const auto count = static_cast<unsigned __int128>(x.size()) * y.size();
  if (count > limits.max_points) {
    throw CapExceeded("product of " + std::to_string(x.size()) + " x " + std::to_string(y.size()) +
                      " points exceeds cap " + std::to_string(limits.max_points));
  }
  const auto* tx = x.coordinates();
  const auto* ty = y.coordinates();
  if (tx != nullptr && ty != nullptr && tx->norm == Norm::kL1 && ty->norm == Norm::kL1 && !x.has_explicit_names() &&
      !y.has_explicit_names()) {
    CoordinateTable t;
    t.dims = tx->dims + ty->dims;
    t.norm = Norm::kL1;
    t.values.reserve(static_cast<std::size_t>(count) * t.dims);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < y.size(); ++j) {
        const auto rx = tx->row(i);
        const auto ry = ty->row(j);
        t.values.insert(t.values.end(), rx.begin(), rx.end());
        t.values.insert(t.values.end(), ry.begin(), ry.end());
      }
    }
    if (!tx->is_plain() || !ty->is_plain()) {
      for (std::size_t a = 0; a < tx->dims; ++a) t.weights.push_back(tx->weight(a));
      for (std::size_t a = 0; a < ty->dims; ++a) t.weights.push_back(ty->weight(a));
      for (std::size_t a = 0; a < tx->dims; ++a) t.moduli.push_back(tx->modulus(a));
      for (std::size_t a = 0; a < ty->dims; ++a) t.moduli.push_back(ty->modulus(a));
    }
    return FiniteMetricSpace::from_coordinates(std::move(t), {}, {}, limits);
  }
  return FiniteMetricSpace(std::make_shared<detail::ProductImpl>(x, y));
}

namespace {

constexpr std::size_t kMaxSignDims = 10;

Distance brute_diameter(const FiniteMetricSpace& space, std::span<const PointId> ids) {
  Distance best(0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const auto d = space.distance(ids[i], ids[j]);
      if (best < d) best = d;
    }
  }
  return best;
}

}  // namespace

Distance diameter(const PointSubset& s) {
  if (s.empty()) throw std::invalid_argument("diameter of an empty subset");
  const auto& space = s.space();
  const auto* t = space.coordinates();
  if (t != nullptr && t->moduli.empty() == false) {
    bool wraps = false;
    for (std::size_t a = 0; a < t->dims; ++a) wraps = wraps || t->modulus(a) != 0;
    if (wraps) return brute_diameter(space, s.ids());
  }
  if (t != nullptr && t->norm == Norm::kSup) {
    std::int64_t best = 0;
    for (std::size_t a = 0; a < t->dims; ++a) {
      std::int64_t lo = t->row(s[0])[a];
      std::int64_t hi = lo;
      for (const auto p : s) {
        lo = std::min(lo, t->row(p)[a]);
        hi = std::max(hi, t->row(p)[a]);
      }
      best = std::max(best, t->weight(a) * (hi - lo));
    }
    return Distance(best);
  }
  if (t != nullptr && t->norm == Norm::kL1 && t->dims <= kMaxSignDims && t->dims > 0) {
    // weighted l1 diameter = max over sign vectors of the spread of the signed sum
    std::int64_t best = 0;
    const std::size_t patterns = std::size_t{1} << (t->dims - 1);
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      std::int64_t lo = 0;
      std::int64_t hi = 0;
      bool first = true;
      for (const auto p : s) {
        const auto row = t->row(p);
        std::int64_t v = t->weight(0) * row[0];
        for (std::size_t a = 1; a < t->dims; ++a) {
          const auto term = t->weight(a) * row[a];
          v += (mask >> (a - 1)) & 1U ? -term : term;
        }
        if (first) {
          lo = hi = v;
          first = false;
        } else {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      best = std::max(best, hi - lo);
    }
    return Distance(best);
  }
  return brute_diameter(space, s.ids());
}

PointSubset neighborhood(const PointSubset& s, const Distance& radius, const PointSubset& universe) {
  if (s.empty()) return PointSubset::none(universe.space());
  if (radius.is_zero()) return s.intersect(universe);
  const detail::ProximityIndex index(universe.space(), universe.ids(), radius);
  std::vector<char> hit(universe.size(), 0);
  for (const auto p : s) {
    index.for_each_near(p, [&](std::size_t pos) { hit[pos] = 1; });
  }
  std::vector<PointId> out;
  for (std::size_t pos = 0; pos < universe.size(); ++pos) {
    if (hit[pos] != 0) out.push_back(universe[pos]);
  }
  return {universe.space(), std::move(out)};
}

PointSubset neighborhood(const PointSubset& s, const Distance& radius) {
  return neighborhood(s, radius, PointSubset::all(s.space()));
}

FiniteMetricSpace restrict_to(const PointSubset& s) {
  if (s.empty()) throw std::invalid_argument("restriction to an empty subset");
  const auto& space = s.space();
  if (const auto* t = space.coordinates()) {
    CoordinateTable sub;
    sub.dims = t->dims;
    sub.norm = t->norm;
    sub.weights = t->weights;
    sub.moduli = t->moduli;
    sub.values.reserve(s.size() * t->dims);
    std::vector<std::string> names;
    std::vector<std::string> labels;
    for (const auto p : s) {
      const auto row = t->row(p);
      sub.values.insert(sub.values.end(), row.begin(), row.end());
      if (space.has_explicit_names()) names.push_back(space.name(p));
      if (space.has_labels()) labels.push_back(space.label(p));
    }
    Limits unlimited;
    unlimited.max_points = s.size();
    return FiniteMetricSpace::from_coordinates(std::move(sub), std::move(names), std::move(labels), unlimited);
  }
  return FiniteMetricSpace(
      std::make_shared<detail::SubspaceImpl>(space, std::vector<PointId>(s.begin(), s.end())));
}

std::vector<Distance> materialize_matrix(const FiniteMetricSpace& space, const Limits& limits) {
  const auto n = space.size();
  if (static_cast<unsigned __int128>(n) * n > limits.pair_budget) {
    throw CapExceeded("materializing " + std::to_string(n) + " points needs " + std::to_string(n * n) +
                      " distance evaluations, over the budget of " + std::to_string(limits.pair_budget));
  }
  std::vector<Distance> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m[i * n + j] = m[j * n + i] = space.distance(static_cast<PointId>(i), static_cast<PointId>(j));
    }
  }
  return m;
}

}  // namespace coarsedim
