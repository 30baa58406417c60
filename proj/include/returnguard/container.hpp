#pragma once

#include <string>
#include <utility>

#include "returnguard/jsonl.hpp"

namespace returnguard::container {

inline constexpr int kFormatVersion = 1;

/// Shared on-disk envelope for every trained model artifact.
inline Json make(const std::string& kind, Json header, Json payload) {
    return Json{{"format_version", kFormatVersion},
                {"kind", kind},
                {"header", std::move(header)},
                {"payload", std::move(payload)}};
}

inline void save(const std::string& path, const std::string& kind, Json header, Json payload) {
    save_json_file(path, make(kind, std::move(header), std::move(payload)), -1);
}

/// Returns {header, payload}; wrong kind or version -> ModelError.
inline std::pair<Json, Json> open(const std::string& path, const std::string& kind) {
    Json j = load_json_file(path);
    if (!j.contains("format_version") ||
        j.at("format_version").get<int>() != kFormatVersion) {
        throw ModelError(path + ": unsupported container version");
    }
    if (j.at("kind").get<std::string>() != kind) {
        throw ModelError(path + ": expected container kind '" + kind + "', found '" +
                         j.at("kind").get<std::string>() + "'");
    }
    return {j.at("header"), j.at("payload")};
}

}  // namespace returnguard::container
