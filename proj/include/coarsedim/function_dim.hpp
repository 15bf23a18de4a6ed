#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coarsedim/components.hpp"
#include "coarsedim/covers.hpp"

namespace coarsedim {

using FiberBoundModel = std::function<Distance(const Distance& r_x, const Distance& big_r_y)>;

// Decomposes (infinity, R_Y)-bounded subsets of the domain of a map: given
// A with diam f(A) <= R_Y, returns k families over carrier A at scale r_X
// with bound D_f(r_X, R_Y) and multiplicity k - m.
struct FiberDecomposer {
  std::string name;
  int m = 0;
  int k = 1;
  std::function<KFamilyCover(const ScaleFunction& f, const PointSubset& a, const Distance& r_x,
                             const Distance& big_r_y)>
      decompose;
  FiberBoundModel bound;
};

// k parts via D^{(j+1)}_f(r, R) = D^{(j)}_f(3r, R) + 2r; identity when k equals inner.k.
FiberDecomposer fiber_ostrand_expand(FiberDecomposer inner, int k);

struct PullbackCover {
  PointSubset carrier;              // f^{-1}(B)
  std::vector<PointSubset> parts;   // k parts
  int m = 0;
  Distance bound;                   // D_f(r_X, R_Y)
  std::vector<Distance> observed_x;  // largest (r_X, r_Y)-component diameter per part
  std::vector<Distance> observed_y;  // largest image diameter of those components
  std::size_t pieces = 0;           // r_Y-components of B with nonempty preimage
  std::size_t min_multiplicity = 0;
  bool ok = false;
};

// Decomposes f^{-1}(S) for every r_Y-component S of B and unites the parts.
PullbackCover pullback_cover(const ScaleFunction& f, const PointSubset& b, const Distance& r_x, const Distance& r_y,
                             const Distance& big_r_y, const FiberDecomposer& fiber);

enum class Padding {
  kAlways,      // c_f + r, D_Y + r, D_f + r + R unconditionally
  kWhenNeeded,  // only where the strict inequality c_f > r, D_Y > r, D_f > r + R fails
};

struct CascadeParams {
  int n = 0;
  Distance r;
  Distance c_f_raw;
  Distance c_f;  // after padding
  Padding padding = Padding::kWhenNeeded;
  // index i = 0..n+1
  std::vector<Distance> r_y;
  std::vector<Distance> big_r_y;
  // index i = 1..n+1; entry 0 is unused
  std::vector<Distance> r_x;
  std::vector<Distance> big_r_x;
  std::vector<std::string> padded;  // descriptions of padded evaluations

  [[nodiscard]] Distance guaranteed() const { return Rational(3) * big_r_x.at(1); }
};

// r^{(n+1)}_Y = c_f(r), R^{(i)}_Y = D_Y(r^{(i)}_Y), r^{(i)}_Y = 3 R^{(i+1)}_Y;
// r^{(n+1)}_X = r, R^{(i)}_X = D_f(r^{(i)}_X, R^{(i)}_Y), r^{(i)}_X = 3 R^{(i+1)}_X.
CascadeParams cascade_params(const Distance& r, int n, const Distance& c_f, const BoundModel& d_y,
                             const FiberBoundModel& d_f, Padding padding = Padding::kWhenNeeded);

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct HurewiczResult {
  CascadeParams cascade;
  std::vector<PointSubset> parts;  // D^1..D^k
  KFamilyCover cover;              // r-components of each part, one family per part
  CoverReport cover_report;
  Distance guaranteed;
  Distance observed;  // largest r-component diameter
  bool saturated = false;
  std::vector<CheckResult> checks;

  [[nodiscard]] bool ok() const noexcept;
};

// Combines an (n, k) decomposer of the codomain with an (m, k) fiber
// decomposer, k = m + n + 1, into a k-part cover of the domain at scale r.
HurewiczResult hurewicz_combine(const ScaleFunction& f, const Distance& r, const SpaceDecomposer& base,
                                const FiberDecomposer& fiber, Padding padding = Padding::kWhenNeeded);

}  // namespace coarsedim
