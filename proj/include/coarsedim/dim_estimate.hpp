#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coarsedim/metric_space.hpp"

namespace coarsedim {

enum class ModelKind { kDilation, kLinear, kBivariate, kBivariateAffine, kTabulated, kUnbounded };
std::string_view to_string(ModelKind kind);

enum class SampleMethod { kOracle, kHeuristic };
std::string_view to_string(SampleMethod method);

struct ProfileSample {
  Distance r;
  std::optional<Distance> big_r_y;  // present for bivariate samples
  int parts = 1;
  Distance bound;
  SampleMethod method = SampleMethod::kHeuristic;
};

// Fitted control function. Coefficients by kind:
//   dilation         {c}        c r
//   linear           {c, b}     c r + b
//   bivariate        {a, b}     a r + b R
//   bivariate-affine {a, b, c}  a r + b R + c
// Tabulated models keep the monotone envelope of the samples.
struct ControlModel {
  ModelKind kind = ModelKind::kUnbounded;
  std::vector<Rational> coefficients;
  std::vector<ProfileSample> table;
  // Max relative error over the fitted samples; nullopt means infinite.
  std::optional<Rational> residual;

  [[nodiscard]] Distance evaluate(const Distance& r, const Distance& big_r = Distance(0)) const;
  [[nodiscard]] std::string describe() const;
};

struct FitOptions {
  Rational tolerance = Rational(1, 10);
};

// Tries dilation, linear, then the bivariate forms when samples carry R_Y,
// and returns the first with residual <= tolerance; otherwise a tabulated model.
ControlModel fit_control_model(std::span<const ProfileSample> samples, const FitOptions& options = {});

// Max relative error |model - bound| / bound over samples (0/0 counts as 0).
std::optional<Rational> relative_residual(const ControlModel& model, std::span<const ProfileSample> samples);

struct Decomposition {
  Distance bound;                  // largest r-component diameter over the parts
  std::vector<PointSubset> parts;  // exactly `parts` entries, some possibly empty
};

struct OracleOptions {
  std::size_t max_points = 14;
};

// Exact minimum over all assignments of S to `parts` classes of the largest
// r-component diameter, with a witness. Throws CapExceeded above the cap.
Decomposition min_bound_oracle(const PointSubset& s, const Distance& r, int parts, const OracleOptions& options = {});

// Greedy assignment in canonical order (label, coordinates, name) to the first
// class that keeps its r-components within `bound`. nullopt when infeasible.
std::optional<Decomposition> ball_carve_decompose(const PointSubset& s, const Distance& r, int parts,
                                                  const Distance& bound);

// Smallest bound (over pairwise distances and 0) at which the greedy succeeds,
// found by binary search.
Decomposition ball_carve_minimize(const PointSubset& s, const Distance& r, int parts);

// Largest r-component diameter of every part.
Distance decomposition_bound(std::span<const PointSubset> parts, const Distance& r);

std::vector<ProfileSample> control_profile(const PointSubset& s, std::span<const Distance> rs, int parts,
                                           const OracleOptions& options = {});

}  // namespace coarsedim
