#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "stablegen/coalescent.hpp"
#include "stablegen/mechanism.hpp"
#include "stablegen/simulate.hpp"
#include "stablegen/stats.hpp"

namespace stablegen {

// {alpha, gamma, b, regime} with regime one of "sub-critical" | "critical".
nlohmann::json mechanism_to_json(const StableMechanism& mech);
StableMechanism mechanism_from_json(const nlohmann::json& j);

const char* origin_name(PathOrigin origin);
PathOrigin origin_from_name(const std::string& name);

// {times: [...], states: [...], origin, truncated}
nlohmann::json path_to_json(const JumpPath& path);
JumpPath path_from_json(const nlohmann::json& j);

// CSV rows "time,state" (no header).
std::string path_to_csv(const JumpPath& path);

nlohmann::json families_to_json(const FamilyDecomposition& families);

// {times: [...], partitions: [[[...block...], ...], ...]} with 1-based labels.
nlohmann::json coalescent_to_json(const CoalescentPath& path);

nlohmann::json empirical_to_json(const EmpiricalDistribution& emp);

// {test, statistic, dof?, pValue, n, seed}
nlohmann::json test_report_json(const std::string& test, double statistic, int dof,
                                double p_value, std::int64_t n, std::uint64_t seed);

// Output provenance block: {toolVersion, mechanism, seed, commandLine}.
nlohmann::json metadata_json(const StableMechanism& mech, std::uint64_t seed,
                             const std::string& command_line);

// The same block as "# key: value" comment lines for CSV outputs.
std::string metadata_csv_header(const StableMechanism& mech, std::uint64_t seed,
                                const std::string& command_line);

}  // namespace stablegen
