#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "coarsedim/components.hpp"
#include "coarsedim/covers.hpp"
#include "coarsedim/dim_estimate.hpp"
#include "coarsedim/function_dim.hpp"
#include "coarsedim/metric_space.hpp"

namespace coarsedim {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchema = "coarsedim/1";

// Malformed document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Distances: integers as JSON numbers, everything else as strings
// ("p/q", "sqrt(p/q)", "inf").
Json distance_to_json(const Distance& d);
Distance distance_from_json(const Json& j);

Json space_to_json(const FiniteMetricSpace& space, const Limits& limits = {});
FiniteMetricSpace space_from_json(const Json& j, const Limits& limits = {});

Json cover_to_json(const KFamilyCover& cover);
KFamilyCover cover_from_json(const Json& j, const FiniteMetricSpace& space);
Json cover_report_to_json(const CoverReport& report, const FiniteMetricSpace& space);

Json partition_to_json(const ComponentPartition& partition);

Json map_to_json(const ScaleFunction& f);
// Accepts {"map": {"x": "y", ...}} or {"map": [["x", "y"], ...]}.
ScaleFunction map_from_json(const Json& j, const FiniteMetricSpace& domain, const FiniteMetricSpace& codomain);

Json cascade_to_json(const CascadeParams& params);
Json model_to_json(const ControlModel& model);
Json samples_to_json(std::span<const ProfileSample> samples);
std::vector<ProfileSample> samples_from_json(const Json& j);
std::string samples_to_csv(std::span<const ProfileSample> samples);
// Rows "r,bound" or "r,R_y,bound" with an optional header line.
std::vector<ProfileSample> samples_from_csv(std::string_view text);

std::string read_file(const std::string& path);
Json read_json_file(const std::string& path);
// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::string& path, std::string_view content);
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex_digest(std::string_view bytes);

}  // namespace coarsedim
