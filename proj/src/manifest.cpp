#include "pixmap/manifest.hpp"

#include "json.hpp"
#include "pixmap/cli.hpp"
#include "pixmap/error.hpp"
#include "pixmap/image.hpp"

namespace pixmap {

std::filesystem::path run_manifest_path(const std::filesystem::path& output) {
  auto path = output;
  if (!path.has_filename()) path = path.parent_path();
  path += ".run.json";
  return path;
}

std::string run_manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "pixmap";
  j["version"] = kToolVersion;
  j["subcommand"] = m.subcommand;
  j["argv"] = m.argv;
  j["settings"] = m.settings;
  j["seeds"] = m.seeds;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  return j.dump(2) + "\n";
}

RunManifest run_manifest_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.settings = j.at("settings").get<std::map<std::string, std::string>>();
    m.seeds = j.at("seeds").get<std::map<std::string, std::string>>();
    m.inputs = j.at("inputs").get<std::vector<std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, std::string("run manifest: ") + e.what());
  }
}

void write_run_manifest(const std::filesystem::path& output,
                        const RunManifest& manifest) {
  write_text_atomic(run_manifest_path(output), run_manifest_to_json(manifest));
}

}  // namespace pixmap
