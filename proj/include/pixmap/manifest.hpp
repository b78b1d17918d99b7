#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pixmap {

/// Provenance record written next to each output as "<output>.run.json".
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;
  std::map<std::string, std::string> settings;  // resolved flag values
  std::map<std::string, std::string> seeds;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double wall_clock_seconds = 0.0;
};

std::filesystem::path run_manifest_path(const std::filesystem::path& output);

std::string run_manifest_to_json(const RunManifest& manifest);
RunManifest run_manifest_from_json(const std::string& text);

/// Atomically writes the manifest beside `output`.
void write_run_manifest(const std::filesystem::path& output,
                        const RunManifest& manifest);

}  // namespace pixmap
