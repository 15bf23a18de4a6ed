#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarsedim/metric_space.hpp"

namespace coarsedim {

// A total map between two finite metric spaces.
class ScaleFunction {
 public:
  ScaleFunction() = default;
  ScaleFunction(FiniteMetricSpace domain, FiniteMetricSpace codomain, std::vector<PointId> map);

  [[nodiscard]] const FiniteMetricSpace& domain() const noexcept { return state_->domain; }
  [[nodiscard]] const FiniteMetricSpace& codomain() const noexcept { return state_->codomain; }
  [[nodiscard]] PointId operator()(PointId p) const noexcept { return state_->map[p]; }
  [[nodiscard]] const std::vector<PointId>& map() const noexcept { return state_->map; }

  [[nodiscard]] PointSubset image(const PointSubset& s) const;
  // Points of the domain mapped into `b` (a subset of the codomain).
  [[nodiscard]] PointSubset preimage(const PointSubset& b) const;
  [[nodiscard]] std::span<const PointId> fiber(PointId y) const noexcept;

  // Optional recorded (r, c_f(r)) samples.
  std::vector<std::pair<Distance, Distance>> samples;

 private:
  struct State {
    FiniteMetricSpace domain;
    FiniteMetricSpace codomain;
    std::vector<PointId> map;
    std::vector<std::uint32_t> fiber_start;  // CSR over codomain points
    std::vector<PointId> fiber_points;
  };
  std::shared_ptr<const State> state_;
};

// Partition of a subset into chain components.
struct ComponentPartition {
  Distance r_x;
  Distance r_y = Distance::infinity();  // infinite for single-parameter components
  bool double_parameter = false;
  std::vector<PointSubset> blocks;      // ordered by smallest member
  std::vector<Distance> diameters;
  std::vector<Distance> image_diameters;  // double-parameter only

  [[nodiscard]] std::size_t size() const noexcept { return blocks.size(); }
  [[nodiscard]] Distance max_diameter() const;
};

// Classes of the chain relation d <= r inside `s`.
ComponentPartition r_components(const PointSubset& s, const Distance& r);

// Chains whose links satisfy d_X <= r_x and d_Y(f., f.) <= r_y. Infinite
// parameters drop the corresponding constraint.
ComponentPartition double_components(const ScaleFunction& f, const PointSubset& s, const Distance& r_x,
                                     const Distance& r_y);

// Block labels only, without diameters: label[i] is the block index of s[i].
std::vector<std::uint32_t> component_labels(const PointSubset& s, const Distance& r);

// The r-component of `s` containing p (which must lie in s), found by
// breadth-first search; cheaper than the full partition when one block is needed.
PointSubset component_of(const PointSubset& s, PointId p, const Distance& r);

// max{ d_Y(f(x), f(y)) : d_X(x, y) <= r }, over all pairs of the domain.
Distance coarseness(const ScaleFunction& f, const Distance& r);
std::vector<std::pair<Distance, Distance>> coarseness_profile(const ScaleFunction& f,
                                                              std::span<const Distance> rs);
// A pair with d_X <= r realizing c_f(r), if c_f(r) > 0.
std::optional<std::pair<PointId, PointId>> coarseness_witness(const ScaleFunction& f, const Distance& r);

struct DoubleControlReport {
  bool precondition_ok = true;
  std::string precondition_failure;
  PointSubset precondition_witness;
  ComponentPartition components;  // of B intersected with the preimage of A
  std::vector<std::size_t> violations;  // indices into components.blocks

  [[nodiscard]] bool ok() const noexcept { return precondition_ok && violations.empty(); }
};

// Checks that the (r_x, r_y)-components of B ∩ f^{-1}(A) are (R_x, R_y)-bounded
// given that r_x-components of B are R_x-bounded and r_y-components of A are
// R_y-bounded.
DoubleControlReport check_double_control(const ScaleFunction& f, const PointSubset& b, const PointSubset& a,
                                         const Distance& r_x, const Distance& r_y, const Distance& big_r_x,
                                         const Distance& big_r_y);

struct GlueLevel {
  Distance r_x;
  Distance r_y = Distance::infinity();
  Distance big_r_x;
  Distance big_r_y = Distance::infinity();
};

struct GlueResult {
  bool valid = false;
  std::size_t first_violation = 0;  // 1-based index i of the failing pair (i, i+1); 0 when valid
  Distance bound_x;
  Distance bound_y;
};

// Levels are listed coarsest first. Valid when every consecutive pair has
// R^{(i+1)} + 2 r^{(i+1)} < r^{(i)} on both coordinates; an infinite coarser
// scale satisfies the condition. The bound is (R^{(1)} + 2 r^{(1)}) per coordinate.
GlueResult union_glue_bound(std::span<const GlueLevel> levels);

}  // namespace coarsedim
