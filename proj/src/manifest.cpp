#include "spinwire/manifest.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "spinwire/config.hpp"

namespace spinwire {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  return fnv1a64(read_file(path));
}

void write_manifest(const std::string& dir, const std::string& config_text,
                    std::uint64_t seed, const std::vector<std::string>& output_files,
                    double elapsed_seconds) {
  nlohmann::json j;
  j["version"] = kVersionTag;
  j["seed"] = seed;
  j["config"] = config_text;
  const auto now = std::chrono::system_clock::now();
  j["wall_clock_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  j["elapsed_seconds"] = elapsed_seconds;

  nlohmann::json outputs = nlohmann::json::array();
  for (const std::string& f : output_files) {
    const std::filesystem::path p = std::filesystem::path(dir) / f;
    nlohmann::json entry;
    entry["file"] = f;
    char digest[20];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(p.string())));
    entry["fnv1a64"] = digest;
    entry["bytes"] = std::filesystem::file_size(p);
    outputs.push_back(entry);
  }
  j["outputs"] = outputs;

  std::ofstream out(std::filesystem::path(dir) / "manifest.json");
  out << j.dump(2) << "\n";
}

}  // namespace spinwire
