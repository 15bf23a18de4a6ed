#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coarsedim/metric_space.hpp"

namespace coarsedim {

// k families of subsets of a carrier. Within a family, distinct sets are
// r-disjoint (every cross pair at distance > scale); every set has diameter
// at most `bound`; every carrier point lies in at least k - n sets.
struct KFamilyCover {
  PointSubset carrier;
  std::vector<std::vector<PointSubset>> families;
  Distance scale;
  Distance bound;
  int n = 0;
  bool saturated = false;  // produced at a scale where the carrier is one set

  [[nodiscard]] std::size_t k() const noexcept { return families.size(); }
  [[nodiscard]] int multiplicity() const noexcept { return static_cast<int>(families.size()) - n; }
  [[nodiscard]] const FiniteMetricSpace& space() const noexcept { return carrier.space(); }
};

struct CoverViolation {
  enum class Kind { kClosePair, kOversized, kUndercovered, kOutsideCarrier, kMalformed };
  Kind kind = Kind::kMalformed;
  std::size_t family = 0;
  std::size_t set_a = 0;
  std::size_t set_b = 0;
  PointId p = 0;
  PointId q = 0;
  Distance value;       // pair distance or set diameter
  std::size_t count = 0;  // multiplicity observed for kUndercovered
  std::string message;
};

std::string_view to_string(CoverViolation::Kind kind);

struct CoverReport {
  std::vector<CoverViolation> violations;
  std::size_t total_violations = 0;  // may exceed violations.size() when truncated
  Distance observed_bound;           // largest set diameter
  std::size_t min_multiplicity = 0;  // over carrier points; 0 for an empty carrier

  [[nodiscard]] bool ok() const noexcept { return total_violations == 0; }
};

// Checks the three cover conditions, keeping at most `max_listed` witnesses.
CoverReport verify_kcover(const KFamilyCover& cover, std::size_t max_listed = 64);

// An operation whose input does not satisfy its stated hypotheses.
class PreconditionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input: a cover at scale >= 3r with multiplicity k - n. Output: k + 1
// families at scale r with bound D + 2r. Families 1..k are the
// r-neighborhoods (within the carrier) of the input sets; family k + 1 holds
// the points lying in exactly k - n input sets and in no neighborhood of the
// other families, grouped by which sets contain them.
KFamilyCover ostrand_expand(const KFamilyCover& cover, const Distance& r);

using BoundModel = std::function<Distance(const Distance&)>;

// Produces an (n, k)-cover of a carrier at a requested scale, with declared
// bound bound(r).
struct SpaceDecomposer {
  std::string name;
  int n = 0;
  int k = 1;
  std::function<KFamilyCover(const PointSubset& carrier, const Distance& r)> decompose;
  BoundModel bound;
};

// D^{(n+1+steps)}(r) from D^{(j+1)}(r) = D^{(j)}(3r) + 2r.
Distance ostrand_bound(const BoundModel& base, int steps, const Distance& r);

// k families at scale r, obtained by expanding a base cover requested at
// scale 3^{k-n-1} r.
KFamilyCover ostrand_tower(const PointSubset& carrier, const SpaceDecomposer& base, int k, const Distance& r);

// Wraps an (n, n+1) decomposer so that it yields k families via ostrand_tower.
SpaceDecomposer tower_decomposer(SpaceDecomposer base, int k);

// Family i is {U x V : U in x.families[i], V in y.families[i]} on the sum metric.
KFamilyCover product_cover(const KFamilyCover& x, const KFamilyCover& y, const Limits& limits = {});

struct TransferResult {
  PointSubset neighborhood;          // B(A, R)
  std::vector<PointSubset> parts;    // R-neighborhoods of the input parts
  Distance bound;                    // D + 2R
  std::vector<Distance> observed;    // largest r-component diameter per part
  bool ok = false;                   // parts cover B(A, R) and respect the bound
};

// Input parts cover A and have (r + 2R)-components bounded by D.
TransferResult neighborhood_transfer(const PointSubset& a, const std::vector<PointSubset>& parts, const Distance& r,
                                     const Distance& big_r, const Distance& bound);

}  // namespace coarsedim
