#include "cpspdc/manifest.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "cpspdc/error.hpp"

namespace cpspdc {

std::string_view version() { return CPSPDC_VERSION; }

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end != nullptr && *end == '\0') now = static_cast<std::time_t>(v);
  }
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p += ".manifest.json";
  return p;
}

std::string serialize_manifest(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "cpspdc";
  j["version"] = m.version;
  j["command_line"] = m.command_line;
  j["database"] = {{"path", m.database_path}, {"sha256", m.database_sha256}};
  j["parameters"] = m.parameters;
  j["outputs"] = m.outputs;
  j["timestamp"] = m.timestamp;
  return j.dump(2) + "\n";
}

RunManifest parse_manifest(std::string_view text, std::string_view origin) {
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.command_line = j.at("command_line").get<std::vector<std::string>>();
    m.database_path = j.at("database").at("path").get<std::string>();
    m.database_sha256 = j.at("database").at("sha256").get<std::string>();
    m.parameters = j.at("parameters");
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.timestamp = j.at("timestamp").get<std::string>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("{}: invalid manifest: {}", origin, e.what()));
  }
}

std::filesystem::path write_manifest(const RunManifest& manifest, const std::filesystem::path& output) {
  const std::filesystem::path path = manifest_path_for(output);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << serialize_manifest(manifest);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
  return path;
}

}  // namespace cpspdc
