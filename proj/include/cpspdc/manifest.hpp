#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cpspdc {

std::string_view version();

/// Provenance record written next to every output file as
/// `<output>.manifest.json`.
struct RunManifest {
  std::vector<std::string> command_line;
  std::string database_path;
  std::string database_sha256;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::string version;
  std::string timestamp;
  std::vector<std::string> outputs;
};

/// ISO-8601 UTC, seconds resolution. SOURCE_DATE_EPOCH overrides the clock.
std::string utc_timestamp();

std::filesystem::path manifest_path_for(const std::filesystem::path& output);

std::string serialize_manifest(const RunManifest& manifest);
RunManifest parse_manifest(std::string_view text, std::string_view origin = "<memory>");

/// Writes `<output>.manifest.json`; returns its path. Throws IoError.
std::filesystem::path write_manifest(const RunManifest& manifest, const std::filesystem::path& output);

}  // namespace cpspdc
