#pragma once

#include <string>

#include <json.hpp>

#include "covercheck/experiments.hpp"
#include "covercheck/space.hpp"

namespace covercheck {

/// JSON form of a space description; the schema is documented in the README.
nlohmann::json space_to_json(const Space& space);
Space space_from_json(const nlohmann::json& j);
Space load_space_file(const std::string& path);

/// Monte Carlo run configuration (space inline or via "space_file", n grid,
/// trials, seed, checker mode, radius policy).
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::string& base_dir = "");
ExperimentConfig load_config_file(const std::string& path);

}  // namespace covercheck
