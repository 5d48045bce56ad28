// manifest.hpp — Run manifests embedded in every result file: a '#'-prefixed
// JSON line followed by the data payload.  The data section (all lines not
// starting with '#') is byte-deterministic; the manifest carries the
// timestamp and is excluded from determinism comparisons.
#pragma once

#include <map>
#include <string>
#include <utility>

namespace furstenberg {

struct RunManifest {
    std::string command;
    std::string spec_path;
    std::map<std::string, std::string> parameters;
    std::string output_path;
    std::string artifact_version;
    std::string timestamp;  // ISO 8601 UTC; informational only

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);

    bool operator==(const RunManifest& other) const = default;
};

// "#" + manifest JSON + "\n" + data.
std::string with_manifest(const RunManifest& manifest, const std::string& data);

// Splits a result file back into (manifest, data section).  Throws
// std::invalid_argument when the manifest line is missing or malformed.
std::pair<RunManifest, std::string> split_manifest(const std::string& text);

// The data section alone: every line not starting with '#'.
std::string data_section(const std::string& text);

std::string artifact_version();

}  // namespace furstenberg
