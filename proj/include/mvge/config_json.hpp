#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "mvge/model.hpp"

namespace mvge {

nlohmann::json config_to_json(const MVGEConfig& cfg);

// Applies the keys present in `j` on top of `base`. Unknown keys are rejected.
// A run manifest (an object with a "config" member) is accepted as well.
MVGEConfig config_from_json(const nlohmann::json& j, MVGEConfig base = {});
MVGEConfig load_config_file(const std::filesystem::path& path, MVGEConfig base = {});

}  // namespace mvge
