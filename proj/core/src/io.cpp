#include "stablegen/io.hpp"

#include <cstdio>
#include <stdexcept>

#include "stablegen/version.hpp"

namespace stablegen {

namespace {

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

nlohmann::json mechanism_to_json(const StableMechanism& mech) {
  return nlohmann::json{{"alpha", mech.alpha},
                        {"gamma", mech.gamma},
                        {"b", mech.b},
                        {"regime", mech.regime == Regime::SubCritical ? "sub-critical" : "critical"}};
}

StableMechanism mechanism_from_json(const nlohmann::json& j) {
  const std::string regime = j.at("regime").get<std::string>();
  if (regime == "critical") {
    return StableMechanism::critical(j.at("gamma").get<double>(), j.at("b").get<double>());
  }
  if (regime != "sub-critical") {
    throw std::invalid_argument("mechanism_from_json: unknown regime '" + regime + "'");
  }
  return StableMechanism::sub_critical(j.at("alpha").get<double>(), j.at("gamma").get<double>(),
                                       j.at("b").get<double>());
}

const char* origin_name(PathOrigin origin) {
  switch (origin) {
    case PathOrigin::GwiClock:
      return "gwi";
    case PathOrigin::AncestralCalendar:
      return "ancestral";
    case PathOrigin::CriticalCalendar:
      return "critical";
  }
  return "gwi";
}

PathOrigin origin_from_name(const std::string& name) {
  if (name == "gwi") {
    return PathOrigin::GwiClock;
  }
  if (name == "ancestral") {
    return PathOrigin::AncestralCalendar;
  }
  if (name == "critical") {
    return PathOrigin::CriticalCalendar;
  }
  throw std::invalid_argument("origin_from_name: unknown origin '" + name + "'");
}

nlohmann::json path_to_json(const JumpPath& path) {
  return nlohmann::json{{"times", path.times},
                        {"states", path.states},
                        {"origin", origin_name(path.origin)},
                        {"truncated", path.truncated}};
}

JumpPath path_from_json(const nlohmann::json& j) {
  JumpPath path;
  path.times = j.at("times").get<std::vector<double>>();
  path.states = j.at("states").get<std::vector<std::int64_t>>();
  path.origin = origin_from_name(j.at("origin").get<std::string>());
  path.truncated = j.at("truncated").get<bool>();
  if (path.times.size() != path.states.size()) {
    throw std::invalid_argument("path_from_json: times and states differ in length");
  }
  return path;
}

std::string path_to_csv(const JumpPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    out += format_double(path.times[i]);
    out += ',';
    out += std::to_string(path.states[i]);
    out += '\n';
  }
  return out;
}

nlohmann::json families_to_json(const FamilyDecomposition& families) {
  return nlohmann::json{{"immigrationClocks", families.immigration_clocks},
                        {"sizes", families.sizes},
                        {"scale", families.scale},
                        {"tailFactor", families.tail_factor}};
}

nlohmann::json coalescent_to_json(const CoalescentPath& path) {
  nlohmann::json partitions = nlohmann::json::array();
  for (const Partition& partition : path.partitions) {
    partitions.push_back(partition.blocks);
  }
  return nlohmann::json{
      {"startTime", path.start_time}, {"times", path.times}, {"partitions", partitions}};
}

nlohmann::json empirical_to_json(const EmpiricalDistribution& emp) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [state, count] : emp.counts) {
    counts[std::to_string(state)] = count;
  }
  return nlohmann::json{{"counts", counts}, {"total", emp.total}};
}

nlohmann::json test_report_json(const std::string& test, double statistic, int dof,
                                double p_value, std::int64_t n, std::uint64_t seed) {
  nlohmann::json j{{"test", test},
                   {"statistic", statistic},
                   {"pValue", p_value},
                   {"n", n},
                   {"seed", seed}};
  if (dof >= 0) {
    j["dof"] = dof;
  }
  return j;
}

nlohmann::json metadata_json(const StableMechanism& mech, std::uint64_t seed,
                             const std::string& command_line) {
  return nlohmann::json{{"toolVersion", kVersion},
                        {"mechanism", mechanism_to_json(mech)},
                        {"seed", seed},
                        {"commandLine", command_line}};
}

std::string metadata_csv_header(const StableMechanism& mech, std::uint64_t seed,
                                const std::string& command_line) {
  std::string out;
  out += "# toolVersion: ";
  out += kVersion;
  out += "\n# mechanism: ";
  out += mechanism_to_json(mech).dump();
  out += "\n# seed: ";
  out += std::to_string(seed);
  out += "\n# commandLine: ";
  out += command_line;
  out += '\n';
  return out;
}

}  // namespace stablegen
