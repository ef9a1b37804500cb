#include "lda/manifest.hpp"

#include "lda/rng.hpp"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lda {

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(buffer.str())));
    return hex;
}

void write_manifest(const RunManifest& manifest, const std::string& output_dir) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["config"] = manifest.config_json.empty()
                      ? nlohmann::json::object()
                      : nlohmann::json::parse(manifest.config_json);
    j["master_seed"] = manifest.master_seed;
    j["version"] = manifest.version;
    j["inputs"] = nlohmann::json::object();
    for (const auto& [path, digest] : manifest.input_digests) j["inputs"][path] = digest;
    j["outputs"] = manifest.outputs;

    std::filesystem::create_directories(output_dir);
    const auto path = std::filesystem::path(output_dir) / "manifest.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("manifest " + path + ": " + e.what());
    }
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config_json = j.at("config").dump();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    for (auto it = j.at("inputs").begin(); it != j.at("inputs").end(); ++it) {
        m.input_digests[it.key()] = it.value().get<std::string>();
    }
    for (const auto& o : j.at("outputs")) m.outputs.push_back(o.get<std::string>());
    return m;
}

} // namespace lda
