#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "solvharm/solvharm.hpp"

namespace solvharm::testing {

inline nlohmann::json load_json(const std::string& name) {
  std::ifstream in(std::string(SOLVHARM_SAMPLES_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing sample " + name);
  return nlohmann::json::parse(in);
}

inline MetricSolvableAlgebra load_sample(const std::string& name) { return build_from_spec(load_json(name)); }

// dim_z, dim_u pairs of the reference Damek-Ricci builds
inline constexpr std::pair<int, int> kDamekRicciBuilds[] = {{1, 2}, {1, 4}, {2, 4}, {3, 4}, {1, 8}};

}  // namespace solvharm::testing
