#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coarsedim/components.hpp"
#include "coarsedim/covers.hpp"
#include "coarsedim/function_dim.hpp"
#include "coarsedim/metric_space.hpp"

namespace coarsedim {

// All integer points of Z^d with l1 norm <= radius, in lexicographic order.
FiniteMetricSpace zd_ball(std::size_t d, std::int64_t radius, const Limits& limits = {});
// The integers lo..hi on a line.
FiniteMetricSpace interval_space(std::int64_t lo, std::int64_t hi, const Limits& limits = {});
// Arbitrary distinct integers on a line, kept in the given order.
FiniteMetricSpace line_space(const std::vector<std::int64_t>& points);

// Bricks in d coordinates have diameter at most brick_constant(d) * ceil(r).
constexpr std::int64_t brick_constant(std::size_t d) noexcept { return static_cast<std::int64_t>(d * (d + 1)); }

// d+1 families of axis-aligned bricks on the given axes of a plain integer
// coordinate space. With rho = ceil(r) and period L = (d+2) rho + 1, grid j
// is shifted by j*rho along the diagonal; a point belongs to a brick of grid
// j when every axis offset (x_a - j rho) mod L lies in [0, (d+1) rho]. Bricks
// of one grid are (rho+1)-separated and every point is in at least one grid.
// A carrier of diameter <= r is returned whole in every family (saturated).
KFamilyCover brick_cover(const PointSubset& carrier, const Distance& r, std::span<const std::size_t> axes);

// (d, d+1) decomposer using all d coordinates; bound brick_constant(d) * ceil(r).
SpaceDecomposer brick_decomposer(std::size_t d);
// (1, k) cover of a line for k = 2 or 3: the one-axis bricks with k shifted
// grids. With period 3 rho + 1 and shift rho, three grids cover every point
// twice, so the bound stays 2 ceil(r) without an expansion step.
KFamilyCover interval_cover(const PointSubset& carrier, const Distance& r, int k, std::size_t axis = 0);
SpaceDecomposer interval_decomposer(int k);
// (m, m+1) fiber decomposer using bricks on the last m coordinates of the
// domain; bound brick_constant(m) * ceil(r_X) + R_Y. The bound holds for
// coordinate projections that forget those coordinates.
FiberDecomposer fiber_brick_decomposer(std::size_t m);

// Named decomposers: "brick:<d>" (expanded to k families) and "interval"
// (k = 2 or 3 on a line).
// decomposer_dimension returns d, the dimension parameter of the named base.
std::size_t decomposer_dimension(std::string_view spec);
SpaceDecomposer make_space_decomposer(std::string_view spec, int k);
FiberDecomposer make_fiber_decomposer(std::string_view spec, int k);

// Vertical segments of length n over the points 2^n, n = 1..N, in the plane
// with l1 distance, projected onto their base points.
struct SegmentsSpace {
  FiniteMetricSpace x;
  FiniteMetricSpace y;
  ScaleFunction f;
};
SegmentsSpace segments_space(int n_max, const Limits& limits = {});

// Per-coordinate cost n * min(x, n - x) of residue x in Z/n.
std::int64_t cyclic_cost(std::int64_t n, std::int64_t x) noexcept;

// Elements of Z/2 + ... + Z/N with norm <= cutoff; coordinate x of Z/n costs
// n * min(x, n - x). Ordered by norm, then coordinates.
FiniteMetricSpace torsion_sum_space(int n_max, std::int64_t cutoff, const Limits& limits = {});

// r(n), s(n) = 8 n r(n), t(1) = 1, t(n+1) = 1 + sum_{i<=n} 4 i t(i) r(i);
// entry n-1 holds level n.
struct TowerParams {
  std::vector<std::int64_t> r;
  std::vector<std::int64_t> s;
  std::vector<std::int64_t> t;
};
using TowerRule = std::function<std::int64_t(int)>;
std::int64_t default_tower_rule(int n);  // r(n) = n + 1
TowerParams tower_params(int n_max, const TowerRule& rule = default_tower_rule);

// Elements of G_1 + ... + G_N, G_n = (Z/s(n))^{n+1}, with norm <= cutoff,
// where G_n carries t(n) times the word metric. Ordered by norm, then coordinates.
FiniteMetricSpace nowak_tower_space(int n_max, std::int64_t cutoff, const TowerParams& params,
                                    const Limits& limits = {});

struct GalleryParams {
  std::string generator;
  int n_max = 0;
  std::int64_t cutoff = 0;
  TowerParams tower;  // tower only
  std::size_t points = 0;
  std::int64_t max_norm = 0;  // largest norm present in the truncation
};

// Norm of a point of a truncation (distance to the zero element).
std::int64_t truncation_norm(const FiniteMetricSpace& space, PointId p);

}  // namespace coarsedim
