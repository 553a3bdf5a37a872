#include "sympflow/manifest.hpp"

#include "sympflow/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace sympflow {

std::string RunManifest::to_json() const {
    nlohmann::ordered_json root;
    root["command"] = command;
    root["version"] = kVersion;
    root["seed"] = seed;
    nlohmann::ordered_json params;
    for (const auto& [key, value] : parameters) params[key] = value;
    root["parameters"] = params;
    nlohmann::ordered_json ins = nlohmann::ordered_json::array();
    for (const auto& in : inputs) {
        nlohmann::ordered_json entry;
        entry["path"] = in.path;
        entry["fnv1a64"] = in.fnv1a64;
        ins.push_back(entry);
    }
    root["inputs"] = ins;
    root["duration_seconds"] = duration_seconds;
    return root.dump(2) + "\n";
}

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file '" + path + "' for digest");
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001B3ULL;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

void write_manifest(const RunManifest& manifest, const std::string& output_path) {
    const std::string path = output_path + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write manifest '" + path + "'");
    out << manifest.to_json();
}

}  // namespace sympflow
