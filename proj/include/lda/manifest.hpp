#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lda {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Reproducibility record written next to every command's outputs: rerun
// the command from the stored config and seed and the non-timing outputs
// come back byte-identical.
struct RunManifest {
    std::string command;
    std::string config_json; // effective flag values as a JSON object
    std::uint64_t master_seed = 0;
    std::string version = kArtifactVersion;
    std::map<std::string, std::string> input_digests; // input path -> content hash
    std::vector<std::string> outputs;                 // paths relative to the directory
};

// FNV-1a over the raw bytes, as a 16-digit hex string.
std::string file_digest_hex(const std::string& path);

// Writes <output_dir>/manifest.json (the directory's single manifest).
void write_manifest(const RunManifest& manifest, const std::string& output_dir);
RunManifest read_manifest(const std::string& path);

} // namespace lda
