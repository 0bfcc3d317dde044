#include "wfr/manifest.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace wfr {

std::string current_utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["tool"] = manifest.tool;
  j["version"] = manifest.version;
  j["subcommand"] = manifest.subcommand;
  j["config"] = manifest.config;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  j["timings_sec"] = manifest.timings_sec;
  j["created_utc"] = manifest.created_utc;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("invalid manifest JSON: ") + e.what());
  }
  RunManifest manifest;
  try {
    manifest.tool = j.at("tool").get<std::string>();
    manifest.version = j.at("version").get<std::string>();
    manifest.subcommand = j.at("subcommand").get<std::string>();
    manifest.config = j.at("config").get<std::map<std::string, std::string>>();
    manifest.inputs = j.at("inputs").get<std::vector<std::string>>();
    manifest.outputs = j.at("outputs").get<std::vector<std::string>>();
    if (j.contains("timings_sec")) {
      manifest.timings_sec =
          j.at("timings_sec").get<std::map<std::string, double>>();
    }
    if (j.contains("created_utc")) {
      manifest.created_utc = j.at("created_utc").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed manifest: ") + e.what());
  }
  return manifest;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp + "' for writing");
    }
    out << manifest_to_json(manifest);
    if (!out) {
      throw std::runtime_error("failed writing manifest to '" + tmp + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("failed to move manifest into place at '" + path +
                             "'");
  }
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open manifest '" + path + "'");
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return manifest_from_json(text);
}

}  // namespace wfr
