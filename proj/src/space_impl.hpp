#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coarsedim/metric_space.hpp"

namespace coarsedim::detail {

class SpaceImpl {
 public:
  virtual ~SpaceImpl() = default;

  [[nodiscard]] virtual Backing backing() const noexcept = 0;
  [[nodiscard]] virtual std::size_t size() const noexcept = 0;
  [[nodiscard]] virtual Distance distance(PointId p, PointId q) const = 0;
  [[nodiscard]] virtual bool within(PointId p, PointId q, const Distance& r) const {
    return distance(p, q) <= r;
  }

  [[nodiscard]] virtual std::string name(PointId p) const { return names_[p]; }
  [[nodiscard]] virtual std::optional<PointId> find(std::string_view name) const;
  [[nodiscard]] bool has_explicit_names() const noexcept { return !names_.empty() || size() == 0; }

  [[nodiscard]] virtual const CoordinateTable* coordinates() const noexcept { return nullptr; }
  [[nodiscard]] virtual const std::vector<FiniteMetricSpace::Edge>* graph_edges() const noexcept {
    return nullptr;
  }
  [[nodiscard]] virtual const std::pair<FiniteMetricSpace, FiniteMetricSpace>* factors() const noexcept {
    return nullptr;
  }

  std::vector<std::string> labels;

 protected:
  void set_names(std::vector<std::string> names);

  std::vector<std::string> names_;
  std::unordered_map<std::string, PointId> index_;
};

class MatrixImpl final : public SpaceImpl {
 public:
  MatrixImpl(std::vector<std::string> names, std::vector<Distance> matrix,
             std::vector<FiniteMetricSpace::Edge> edges, bool graph);

  [[nodiscard]] Backing backing() const noexcept override { return graph_ ? Backing::kGraph : Backing::kMatrix; }
  [[nodiscard]] std::size_t size() const noexcept override { return n_; }
  [[nodiscard]] Distance distance(PointId p, PointId q) const override { return matrix_[p * n_ + q]; }
  [[nodiscard]] const std::vector<FiniteMetricSpace::Edge>* graph_edges() const noexcept override {
    return graph_ ? &edges_ : nullptr;
  }

 private:
  std::size_t n_;
  std::vector<Distance> matrix_;
  std::vector<FiniteMetricSpace::Edge> edges_;
  bool graph_;
};

class CoordsImpl final : public SpaceImpl {
 public:
  CoordsImpl(CoordinateTable table, std::vector<std::string> names);

  [[nodiscard]] Backing backing() const noexcept override { return Backing::kCoords; }
  [[nodiscard]] std::size_t size() const noexcept override { return table_.size(); }
  [[nodiscard]] Distance distance(PointId p, PointId q) const override;
  [[nodiscard]] bool within(PointId p, PointId q, const Distance& r) const override;
  [[nodiscard]] std::string name(PointId p) const override;
  [[nodiscard]] std::optional<PointId> find(std::string_view name) const override;
  [[nodiscard]] const CoordinateTable* coordinates() const noexcept override { return &table_; }

  // Point with exactly these (normalized) coordinates.
  [[nodiscard]] std::optional<PointId> find_coords(std::span<const std::int64_t> coords) const;

 private:
  CoordinateTable table_;
  std::vector<PointId> sorted_;  // permutation sorted lexicographically by coordinates
};

class ProductImpl final : public SpaceImpl {
 public:
  ProductImpl(FiniteMetricSpace x, FiniteMetricSpace y);

  [[nodiscard]] Backing backing() const noexcept override { return Backing::kProduct; }
  [[nodiscard]] std::size_t size() const noexcept override { return nx_ * ny_; }
  [[nodiscard]] Distance distance(PointId p, PointId q) const override;
  [[nodiscard]] const std::pair<FiniteMetricSpace, FiniteMetricSpace>* factors() const noexcept override {
    return &factors_;
  }

 private:
  std::pair<FiniteMetricSpace, FiniteMetricSpace> factors_;
  std::size_t nx_;
  std::size_t ny_;
};

class SubspaceImpl final : public SpaceImpl {
 public:
  SubspaceImpl(FiniteMetricSpace parent, std::vector<PointId> ids);

  [[nodiscard]] Backing backing() const noexcept override { return Backing::kSubspace; }
  [[nodiscard]] std::size_t size() const noexcept override { return ids_.size(); }
  [[nodiscard]] Distance distance(PointId p, PointId q) const override {
    return parent_.distance(ids_[p], ids_[q]);
  }
  [[nodiscard]] bool within(PointId p, PointId q, const Distance& r) const override {
    return parent_.within(ids_[p], ids_[q], r);
  }

 private:
  FiniteMetricSpace parent_;
  std::vector<PointId> ids_;
};

std::string coordinate_name(std::span<const std::int64_t> coords);

}  // namespace coarsedim::detail
