#pragma once

#include "json.hpp"
#include "qtf/config.hpp"

namespace qtf::detail {

nlohmann::json config_json(const RunConfig& config, bool include_output_dir);
RunConfig config_from_json(const nlohmann::json& doc);
std::string sha1_blob_hex(const std::string& content);

}  // namespace qtf::detail
