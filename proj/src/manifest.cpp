#include "furstenberg/manifest.hpp"

#include <json.hpp>

#include <stdexcept>

#ifndef FURSTENBERG_VERSION
#define FURSTENBERG_VERSION "0.0.0"
#endif

namespace furstenberg {

std::string artifact_version() { return FURSTENBERG_VERSION; }

std::string RunManifest::to_json() const {
    nlohmann::json doc;
    doc["command"] = command;
    doc["spec_path"] = spec_path;
    doc["parameters"] = parameters;
    doc["output_path"] = output_path;
    doc["artifact_version"] = artifact_version;
    doc["timestamp"] = timestamp;
    return doc.dump();
}

RunManifest RunManifest::from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    RunManifest m;
    m.command = doc.at("command").get<std::string>();
    m.spec_path = doc.at("spec_path").get<std::string>();
    m.parameters =
        doc.at("parameters").get<std::map<std::string, std::string>>();
    m.output_path = doc.at("output_path").get<std::string>();
    m.artifact_version = doc.at("artifact_version").get<std::string>();
    m.timestamp = doc.at("timestamp").get<std::string>();
    return m;
}

std::string with_manifest(const RunManifest& manifest, const std::string& data) {
    return "#" + manifest.to_json() + "\n" + data;
}

std::pair<RunManifest, std::string> split_manifest(const std::string& text) {
    if (text.empty() || text[0] != '#')
        throw std::invalid_argument("result file does not start with a manifest line");
    const std::size_t eol = text.find('\n');
    const std::string line =
        eol == std::string::npos ? text.substr(1) : text.substr(1, eol - 1);
    RunManifest manifest;
    try {
        manifest = RunManifest::from_json(line);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed manifest line: ") +
                                    e.what());
    }
    const std::string rest =
        eol == std::string::npos ? std::string() : text.substr(eol + 1);
    return {manifest, rest};
}

std::string data_section(const std::string& text) {
    std::string out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t pos = text.find('\n', start);
        const bool last = pos == std::string::npos;
        if (last) pos = text.size();
        if (pos > start && text[start] != '#') {
            out.append(text, start, pos - start);
            out.push_back('\n');
        }
        if (last) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace furstenberg
