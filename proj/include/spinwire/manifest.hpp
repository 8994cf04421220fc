#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spinwire {

inline constexpr const char* kVersionTag = "spinwire 0.1.0";

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::string& path);

/// Writes manifest.json into dir: version tag, seed, config echo, wall clock,
/// and an inventory of the output files with FNV-1a 64 content digests.
void write_manifest(const std::string& dir, const std::string& config_text,
                    std::uint64_t seed, const std::vector<std::string>& output_files,
                    double elapsed_seconds);

}  // namespace spinwire
