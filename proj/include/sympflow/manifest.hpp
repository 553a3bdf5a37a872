#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sympflow {

inline constexpr const char* kVersion = "0.1.0";

/// Provenance record written next to every output file: the fully resolved
/// parameter set plus input digests. Two runs with equal manifests (duration
/// aside) produce identical outputs.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;  ///< resolved, defaults included
    std::uint64_t seed = 0;
    struct InputDigest {
        std::string path;
        std::string fnv1a64;
    };
    std::vector<InputDigest> inputs;
    double duration_seconds = 0.0;

    std::string to_json() const;
};

/// FNV-1a 64-bit digest of a file, as 16 hex digits. Throws ParseError when
/// the file cannot be read.
std::string fnv1a64_file(const std::string& path);

/// Writes `manifest.to_json()` to `<output_path>.manifest.json`.
void write_manifest(const RunManifest& manifest, const std::string& output_path);

}  // namespace sympflow
