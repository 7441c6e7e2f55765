#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace dqe::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct InputDigest {
  std::string path;
  std::string sha256;
};

/// One per run, written as manifest.json next to the outputs. Contains no
/// timestamps so identical runs produce identical manifests.
struct RunManifest {
  std::string subcommand;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;
};

std::string sha256_file(const std::filesystem::path& path);
std::filesystem::path write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest);

}  // namespace dqe::cli
