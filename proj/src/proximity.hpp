#pragma once

// Internal: enumerate close pairs without scanning all pairs when the backing
// allows it. Coordinate spaces use a cell grid (plain axes) or an explicit
// enumeration of the offset ball (cyclic or weighted l1 axes); everything else
// falls back to a linear scan.

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "coarsedim/metric_space.hpp"

namespace coarsedim::detail {

class ProximityIndex {
 public:
  ProximityIndex(const FiniteMetricSpace& space, std::span<const PointId> points, const Distance& radius);

  // Calls visit(pos) for every pos with d(points[pos], q) <= radius.
  template <class Visit>
  void for_each_near(PointId q, Visit&& visit) const;

  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] PointId point(std::size_t pos) const noexcept { return points_[pos]; }

 private:
  enum class Mode { kAll, kGrid, kOffsets, kScan };

  struct CellHash {
    std::size_t operator()(const std::vector<std::int64_t>& key) const noexcept;
  };

  [[nodiscard]] bool close_raw(PointId a, PointId b) const noexcept;
  void build_grid();
  bool build_offsets();
  [[nodiscard]] std::ptrdiff_t lookup(std::span<const std::int64_t> coords) const;

  const FiniteMetricSpace& space_;
  std::vector<PointId> points_;
  Distance radius_;
  Mode mode_ = Mode::kScan;

  const CoordinateTable* table_ = nullptr;
  std::int64_t threshold_ = 0;  // raw integer threshold for coordinate tables

  // grid
  std::vector<std::int64_t> cell_size_;
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::uint32_t>, CellHash> cells_;

  // offsets
  std::vector<std::int64_t> offsets_;   // flattened offset vectors
  std::vector<std::uint32_t> sorted_;   // positions sorted by coordinates
  // mixed-radix point codes, used when the coordinate box fits in 64 bits
  std::vector<std::int64_t> lo_;
  std::vector<std::uint64_t> radix_;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> codes_;
};

template <class Visit>
void ProximityIndex::for_each_near(PointId q, Visit&& visit) const {
  switch (mode_) {
    case Mode::kAll:
      for (std::size_t pos = 0; pos < points_.size(); ++pos) visit(pos);
      return;
    case Mode::kScan:
      if (table_ != nullptr) {
        for (std::size_t pos = 0; pos < points_.size(); ++pos) {
          if (table_->raw_distance(q, points_[pos]) <= threshold_) visit(pos);
        }
      } else {
        for (std::size_t pos = 0; pos < points_.size(); ++pos) {
          if (space_.within(q, points_[pos], radius_)) visit(pos);
        }
      }
      return;
    case Mode::kGrid: {
      const std::size_t dims = table_->dims;
      const auto row = table_->row(q);
      std::vector<std::int64_t> base(dims);
      for (std::size_t a = 0; a < dims; ++a) {
        const auto c = cell_size_[a];
        const auto x = row[a];
        base[a] = x >= 0 ? x / c : -((-x + c - 1) / c);
      }
      std::vector<std::int64_t> key(dims);
      std::vector<int> step(dims, -1);
      while (true) {
        for (std::size_t a = 0; a < dims; ++a) key[a] = base[a] + step[a];
        if (const auto it = cells_.find(key); it != cells_.end()) {
          for (const auto pos : it->second) {
            if (table_->raw_distance(q, points_[pos]) <= threshold_) visit(static_cast<std::size_t>(pos));
          }
        }
        std::size_t a = 0;
        while (a < dims && step[a] == 1) step[a++] = -1;
        if (a == dims) break;
        ++step[a];
      }
      return;
    }
    case Mode::kOffsets: {
      const std::size_t dims = table_->dims;
      const auto row = table_->row(q);
      std::vector<std::int64_t> target(dims);
      for (std::size_t o = 0; o + dims <= offsets_.size(); o += dims) {
        for (std::size_t a = 0; a < dims; ++a) {
          auto v = row[a] + offsets_[o + a];
          if (const auto m = table_->modulus(a); m != 0) v = ((v % m) + m) % m;
          target[a] = v;
        }
        if (const auto pos = lookup(target); pos >= 0) visit(static_cast<std::size_t>(pos));
      }
      return;
    }
  }
}

// visit(i, j) for every i < j (positions in `points`) with d <= radius.
template <class Visit>
void for_each_close_pair(const FiniteMetricSpace& space, std::span<const PointId> points, const Distance& radius,
                         Visit&& visit) {
  const ProximityIndex index(space, points, radius);
  for (std::size_t i = 0; i < points.size(); ++i) {
    index.for_each_near(points[i], [&](std::size_t j) {
      if (j > i) visit(i, j);
    });
  }
}

}  // namespace coarsedim::detail
