#include "proximity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coarsedim::detail {
namespace {

constexpr std::size_t kMaxGridDims = 4;
constexpr std::int64_t kNoLimit = std::numeric_limits<std::int64_t>::max();

std::int64_t isqrt_floor(std::int64_t v) {
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (s > 0 && static_cast<__int128>(s) * s > v) --s;
  while (static_cast<__int128>(s + 1) * (s + 1) <= v) ++s;
  return s;
}

std::int64_t raw_threshold(const CoordinateTable& table, const Distance& r) {
  try {
    if (table.norm == Norm::kL2Squared) return r.square().floor();
    return r.floor();
  } catch (const std::overflow_error&) {
    return kNoLimit;
  }
}

}  // namespace

std::size_t ProximityIndex::CellHash::operator()(const std::vector<std::int64_t>& key) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto v : key) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

ProximityIndex::ProximityIndex(const FiniteMetricSpace& space, std::span<const PointId> points,
                               const Distance& radius)
    : space_(space), points_(points.begin(), points.end()), radius_(radius) {
  if (radius.is_infinite()) {
    mode_ = Mode::kAll;
    return;
  }
  table_ = space.coordinates();
  if (table_ == nullptr) {
    mode_ = Mode::kScan;
    return;
  }
  threshold_ = raw_threshold(*table_, radius);
  bool wraps = false;
  for (std::size_t a = 0; a < table_->dims; ++a) wraps = wraps || table_->modulus(a) != 0;
  if (!wraps && table_->dims <= kMaxGridDims && threshold_ != kNoLimit) {
    build_grid();
    mode_ = Mode::kGrid;
    return;
  }
  if (table_->norm == Norm::kL1 && threshold_ != kNoLimit && build_offsets()) {
    mode_ = Mode::kOffsets;
    return;
  }
  mode_ = Mode::kScan;
}

bool ProximityIndex::close_raw(PointId a, PointId b) const noexcept {
  return table_->raw_distance(a, b) <= threshold_;
}

void ProximityIndex::build_grid() {
  const std::size_t dims = table_->dims;
  const std::int64_t reach = table_->norm == Norm::kL2Squared ? isqrt_floor(threshold_) : threshold_;
  cell_size_.resize(dims);
  for (std::size_t a = 0; a < dims; ++a) cell_size_[a] = std::max<std::int64_t>(1, reach / table_->weight(a));
  std::vector<std::int64_t> key(dims);
  for (std::size_t pos = 0; pos < points_.size(); ++pos) {
    const auto row = table_->row(points_[pos]);
    for (std::size_t a = 0; a < dims; ++a) {
      const auto c = cell_size_[a];
      const auto x = row[a];
      key[a] = x >= 0 ? x / c : -((-x + c - 1) / c);
    }
    cells_[key].push_back(static_cast<std::uint32_t>(pos));
  }
}

bool ProximityIndex::build_offsets() {
  const std::size_t dims = table_->dims;
  const std::size_t limit = std::max<std::size_t>(64, points_.size() / 4);
  std::vector<std::int64_t> current(dims, 0);
  bool overflow = false;

  // depth-first enumeration of offsets with weighted cyclic l1 cost <= threshold
  auto recurse = [&](auto&& self, std::size_t axis, std::int64_t budget) -> void {
    if (overflow) return;
    if (axis == dims) {
      if (offsets_.size() / std::max<std::size_t>(dims, 1) >= limit) {
        overflow = true;
        return;
      }
      offsets_.insert(offsets_.end(), current.begin(), current.end());
      return;
    }
    const auto w = table_->weight(axis);
    const auto m = table_->modulus(axis);
    if (m != 0) {
      for (std::int64_t t = 0; t < m; ++t) {
        const auto cost = w * std::min(t, m - t);
        if (cost > budget) continue;
        current[axis] = t;
        self(self, axis + 1, budget - cost);
      }
    } else {
      const auto reach = budget / w;
      for (std::int64_t t = -reach; t <= reach; ++t) {
        current[axis] = t;
        self(self, axis + 1, budget - w * (t < 0 ? -t : t));
      }
    }
    current[axis] = 0;
  };
  recurse(recurse, 0, threshold_);
  if (overflow) {
    offsets_.clear();
    return false;
  }
  lo_.assign(dims, 0);
  radix_.assign(dims, 1);
  unsigned __int128 box = 1;
  for (std::size_t a = 0; a < dims && box <= (std::uint64_t{1} << 62); ++a) {
    if (const auto m = table_->modulus(a); m != 0) {
      radix_[a] = static_cast<std::uint64_t>(m);
    } else if (!points_.empty()) {
      std::int64_t lo = table_->row(points_[0])[a];
      std::int64_t hi = lo;
      for (const auto p : points_) {
        lo = std::min(lo, table_->row(p)[a]);
        hi = std::max(hi, table_->row(p)[a]);
      }
      lo_[a] = lo;
      radix_[a] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(hi - lo) + 1);
    }
    box *= radix_[a];
  }
  if (box <= (std::uint64_t{1} << 62)) {
    codes_.reserve(points_.size());
    for (std::size_t pos = 0; pos < points_.size(); ++pos) {
      std::uint64_t code = 0;
      const auto row = table_->row(points_[pos]);
      for (std::size_t a = 0; a < dims; ++a) code = code * radix_[a] + static_cast<std::uint64_t>(row[a] - lo_[a]);
      codes_.emplace_back(code, static_cast<std::uint32_t>(pos));
    }
    std::sort(codes_.begin(), codes_.end());
    return true;
  }
  sorted_.resize(points_.size());
  for (std::size_t pos = 0; pos < points_.size(); ++pos) sorted_[pos] = static_cast<std::uint32_t>(pos);
  std::sort(sorted_.begin(), sorted_.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto ra = table_->row(points_[a]);
    const auto rb = table_->row(points_[b]);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  return true;
}

std::ptrdiff_t ProximityIndex::lookup(std::span<const std::int64_t> coords) const {
  if (!codes_.empty()) {
    std::uint64_t code = 0;
    for (std::size_t a = 0; a < coords.size(); ++a) {
      const auto v = coords[a] - lo_[a];
      if (v < 0 || static_cast<std::uint64_t>(v) >= radix_[a]) return -1;
      code = code * radix_[a] + static_cast<std::uint64_t>(v);
    }
    const auto it = std::lower_bound(codes_.begin(), codes_.end(), std::make_pair(code, std::uint32_t{0}));
    if (it == codes_.end() || it->first != code) return -1;
    return static_cast<std::ptrdiff_t>(it->second);
  }
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), coords, [&](std::uint32_t pos, auto key) {
    const auto row = table_->row(points_[pos]);
    return std::lexicographical_compare(row.begin(), row.end(), key.begin(), key.end());
  });
  if (it == sorted_.end()) return -1;
  const auto row = table_->row(points_[*it]);
  if (!std::equal(row.begin(), row.end(), coords.begin(), coords.end())) return -1;
  return static_cast<std::ptrdiff_t>(*it);
}

}  // namespace coarsedim::detail
