#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coarsedim/distance.hpp"

namespace coarsedim {

using PointId = std::uint32_t;

enum class Backing { kMatrix, kGraph, kCoords, kProduct, kSubspace };
enum class Norm { kL1, kL2Squared, kSup };

std::string_view to_string(Backing backing);
std::string_view to_string(Norm norm);
Norm parse_norm(std::string_view text);

// Input that does not describe a valid finite metric space.
class InvalidSpace : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Matrix input violating d(a,c) <= d(a,b) + d(b,c).
class TriangleViolation : public InvalidSpace {
 public:
  TriangleViolation(std::string a, std::string b, std::string c, const std::string& detail)
      : InvalidSpace(detail), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}
  [[nodiscard]] const std::string& a() const noexcept { return a_; }
  [[nodiscard]] const std::string& b() const noexcept { return b_; }
  [[nodiscard]] const std::string& c() const noexcept { return c_; }

 private:
  std::string a_, b_, c_;
};

// Raised when a construction would exceed the configured size limits.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Limits {
  // Hard cap on the number of points of any constructed space.
  std::size_t max_points = 50'000;
  // Budget of pairwise distance evaluations for materializing a lazily
  // backed space (e.g. exporting a product as a dense matrix).
  std::uint64_t pair_budget = 200'000;
};

// Integer coordinates with a per-axis weight and optional cyclic modulus.
//
//   l1:   d = sum_a  w_a * c_a(x_a - y_a)
//   sup:  d = max_a  w_a * c_a(x_a - y_a)
//   l2sq: d = sqrt(sum_a (w_a * c_a(x_a - y_a))^2)
//
// where c_a(t) = |t| when moduli[a] == 0 and min(t mod m, m - t mod m)
// otherwise. For l2sq the squared value is what is stored and compared.
struct CoordinateTable {
  std::size_t dims = 0;
  Norm norm = Norm::kL1;
  std::vector<std::int64_t> values;   // row-major, size() * dims
  std::vector<std::int64_t> weights;  // empty or dims entries, all >= 1
  std::vector<std::int64_t> moduli;   // empty or dims entries, 0 = no wrap

  [[nodiscard]] std::size_t size() const noexcept { return dims == 0 ? 0 : values.size() / dims; }
  [[nodiscard]] std::span<const std::int64_t> row(std::size_t i) const noexcept {
    return {values.data() + i * dims, dims};
  }
  [[nodiscard]] std::int64_t weight(std::size_t axis) const noexcept {
    return weights.empty() ? 1 : weights[axis];
  }
  [[nodiscard]] std::int64_t modulus(std::size_t axis) const noexcept {
    return moduli.empty() ? 0 : moduli[axis];
  }
  [[nodiscard]] bool is_plain() const noexcept;  // unit weights, no wrapping
  [[nodiscard]] std::int64_t axis_gap(std::size_t axis, std::int64_t a, std::int64_t b) const noexcept;
  // l1/sup distance, or squared distance for l2sq.
  [[nodiscard]] std::int64_t raw_distance(std::size_t i, std::size_t j) const noexcept;
};

namespace detail {
class SpaceImpl;
}

// Immutable finite metric space with exact distances. Copies share state and
// are safe to use from concurrent readers.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace();

  // Dense symmetric matrix (row-major). Validates the metric axioms,
  // including the triangle inequality.
  static FiniteMetricSpace from_matrix(std::vector<std::string> names, std::vector<Distance> matrix,
                                       std::vector<std::string> labels = {});
  struct Edge {
    std::string a;
    std::string b;
    Distance weight;
  };
  // Shortest-path metric of a connected weighted graph.
  static FiniteMetricSpace from_graph(std::vector<std::string> names, std::vector<Edge> edges,
                                      std::vector<std::string> labels = {});
  // Coordinate points. Names are generated as "(x,y,...)" when `names` is empty.
  static FiniteMetricSpace from_coordinates(CoordinateTable table, std::vector<std::string> names = {},
                                            std::vector<std::string> labels = {},
                                            const Limits& limits = {});

  [[nodiscard]] std::size_t size() const noexcept;
  [[nodiscard]] bool empty() const noexcept { return size() == 0; }
  [[nodiscard]] Backing backing() const noexcept;

  [[nodiscard]] std::string name(PointId p) const;
  [[nodiscard]] std::optional<PointId> find(std::string_view name) const;
  // Like find() but throws std::out_of_range for unknown names.
  [[nodiscard]] PointId at(std::string_view name) const;
  [[nodiscard]] bool has_explicit_names() const noexcept;

  [[nodiscard]] bool has_labels() const noexcept;
  [[nodiscard]] std::string label(PointId p) const;

  [[nodiscard]] Distance distance(PointId p, PointId q) const;
  // d(p, q) <= r, evaluated without leaving integer arithmetic where possible.
  [[nodiscard]] bool within(PointId p, PointId q, const Distance& r) const;

  // Non-null only for coordinate backing.
  [[nodiscard]] const CoordinateTable* coordinates() const noexcept;
  // Graph backing only: the declared edges.
  [[nodiscard]] const std::vector<Edge>* graph_edges() const noexcept;
  // Product backing only: the factors.
  [[nodiscard]] std::optional<std::pair<FiniteMetricSpace, FiniteMetricSpace>> factors() const;

  [[nodiscard]] bool same_as(const FiniteMetricSpace& other) const noexcept {
    return impl_ == other.impl_;
  }

  [[nodiscard]] const detail::SpaceImpl& impl() const noexcept { return *impl_; }
  explicit FiniteMetricSpace(std::shared_ptr<const detail::SpaceImpl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const detail::SpaceImpl> impl_;
};

// Sorted, duplicate-free set of points of one space.
class PointSubset {
 public:
  PointSubset() = default;
  PointSubset(FiniteMetricSpace space, std::vector<PointId> ids);

  static PointSubset all(const FiniteMetricSpace& space);
  static PointSubset none(const FiniteMetricSpace& space) { return {space, {}}; }
  static PointSubset from_names(const FiniteMetricSpace& space, std::span<const std::string> names);

  [[nodiscard]] const FiniteMetricSpace& space() const noexcept { return space_; }
  [[nodiscard]] std::span<const PointId> ids() const noexcept { return ids_; }
  [[nodiscard]] std::size_t size() const noexcept { return ids_.size(); }
  [[nodiscard]] bool empty() const noexcept { return ids_.empty(); }
  [[nodiscard]] bool contains(PointId p) const noexcept;
  [[nodiscard]] PointId operator[](std::size_t i) const noexcept { return ids_[i]; }
  [[nodiscard]] auto begin() const noexcept { return ids_.begin(); }
  [[nodiscard]] auto end() const noexcept { return ids_.end(); }
  [[nodiscard]] std::vector<std::string> names() const;

  [[nodiscard]] PointSubset unite(const PointSubset& other) const;
  [[nodiscard]] PointSubset intersect(const PointSubset& other) const;
  [[nodiscard]] PointSubset minus(const PointSubset& other) const;
  [[nodiscard]] bool is_subset_of(const PointSubset& other) const;

  friend bool operator==(const PointSubset& a, const PointSubset& b) noexcept { return a.ids_ == b.ids_; }

 private:
  FiniteMetricSpace space_;
  std::vector<PointId> ids_;
};

// Sum metric on the Cartesian product; point (x, y) has id x * |Y| + y.
// Two l1 coordinate spaces yield an l1 coordinate space on concatenated
// coordinates; everything else is evaluated lazily from the factors.
FiniteMetricSpace product_sum(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const Limits& limits = {});

// Maximum pairwise distance; 0 for singletons. Throws std::invalid_argument for an empty set.
Distance diameter(const PointSubset& s);

// Points of `universe` within distance <= radius of some point of `s`.
PointSubset neighborhood(const PointSubset& s, const Distance& radius, const PointSubset& universe);
// Points of the whole space within distance <= radius of `s`.
PointSubset neighborhood(const PointSubset& s, const Distance& radius);

// Induced subspace; point i of the result is s[i].
FiniteMetricSpace restrict_to(const PointSubset& s);

// Dense row-major distance matrix, subject to limits.pair_budget.
std::vector<Distance> materialize_matrix(const FiniteMetricSpace& space, const Limits& limits = {});

}  // namespace coarsedim
