#pragma once

#include <map>
#include <string>
#include <vector>

namespace wfr {

// Provenance record written next to every CLI output: which subcommand ran,
// with which configuration values, reading and writing which files.  A saved
// manifest can be fed back to the CLI (--from-manifest) to replay the run.
struct RunManifest {
  std::string tool = "wfr";
  std::string version;
  std::string subcommand;
  std::map<std::string, std::string> config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::map<std::string, double> timings_sec;
  std::string created_utc;  // ISO 8601, e.g. 2024-05-01T12:34:56Z
};

std::string current_utc_timestamp();

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

// Atomic write: serialize to <path>.tmp, then rename over <path>.
void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

}  // namespace wfr
